//! One-hidden-layer sigmoid network trained by per-sample backpropagation
//! on the squared error `E = ½ Σ (target − output)²`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::numfmt::sig;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MlpError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("model file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn check_len(expected: usize, got: usize) -> Result<(), MlpError> {
    if expected == got {
        Ok(())
    } else {
        Err(MlpError::DimensionMismatch { expected, got })
    }
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Derivative of the sigmoid expressed through its output `y`.
pub fn sigmoid_prime(y: f64) -> f64 {
    y * (1.0 - y)
}

/// Weights are row-major: `w_hidden[j * n1 + i]` connects input `i` to
/// hidden unit `j`, `w_output[k * n2 + j]` connects hidden `j` to output `k`.
/// Thresholds are added to each unit's weighted sum.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub w_hidden: Vec<f64>,
    pub theta_hidden: Vec<f64>,
    pub w_output: Vec<f64>,
    pub theta_output: Vec<f64>,
}

/// Same layout as [`MlpModel`]'s parameters. Entries are descent
/// directions, `−∂E/∂w`, so an update is `w += lr * grad`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w_hidden: Vec<f64>,
    pub theta_hidden: Vec<f64>,
    pub w_output: Vec<f64>,
    pub theta_output: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Activations {
    pub hidden: Vec<f64>,
    pub output: Vec<f64>,
}

impl MlpModel {
    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Self {
        MlpModel {
            n1,
            n2,
            n3,
            w_hidden: vec![0.0; n2 * n1],
            theta_hidden: vec![0.0; n2],
            w_output: vec![0.0; n3 * n2],
            theta_output: vec![0.0; n3],
        }
    }

    /// Every parameter uniform in [−0.5, 0.5], drawn in field order.
    pub fn random(n1: usize, n2: usize, n3: usize, rng: &mut impl Rng) -> Self {
        let mut m = Self::zeros(n1, n2, n3);
        for p in m.params_mut() {
            *p = rng.gen_range(-0.5..=0.5);
        }
        m
    }

    fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.w_hidden
            .iter_mut()
            .chain(self.theta_hidden.iter_mut())
            .chain(self.w_output.iter_mut())
            .chain(self.theta_output.iter_mut())
    }

    pub fn params(&self) -> impl Iterator<Item = &f64> {
        self.w_hidden.iter().chain(&self.theta_hidden).chain(&self.w_output).chain(&self.theta_output)
    }

    /// Applies `w += lr * grad` to every parameter.
    pub fn apply(&mut self, grads: &Gradients, lr: f64) {
        let g = grads.w_hidden.iter().chain(&grads.theta_hidden).chain(&grads.w_output).chain(&grads.theta_output);
        for (p, d) in self.params_mut().zip(g) {
            *p += lr * d;
        }
    }
}

pub fn forward(model: &MlpModel, input: &[f64]) -> Result<Activations, MlpError> {
    check_len(model.n1, input.len())?;
    let hidden: Vec<f64> = model
        .w_hidden
        .chunks_exact(model.n1)
        .zip(&model.theta_hidden)
        .map(|(row, theta)| sigmoid(dot(row, input) + theta))
        .collect();
    let output = model
        .w_output
        .chunks_exact(model.n2)
        .zip(&model.theta_output)
        .map(|(row, theta)| sigmoid(dot(row, &hidden) + theta))
        .collect();
    Ok(Activations { hidden, output })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn total_error(expected: &[f64], output: &[f64]) -> Result<f64, MlpError> {
    check_len(expected.len(), output.len())?;
    Ok(0.5 * expected.iter().zip(output).map(|(e, o)| (e - o) * (e - o)).sum::<f64>())
}

pub fn backward(model: &MlpModel, input: &[f64], target: &[f64]) -> Result<Gradients, MlpError> {
    check_len(model.n3, target.len())?;
    let Activations { hidden, output } = forward(model, input)?;

    // output deltas: (Ô_k − O_k) · O_k (1 − O_k)
    let delta_out: Vec<f64> = target.iter().zip(&output).map(|(t, o)| (t - o) * sigmoid_prime(*o)).collect();
    let mut w_output = Vec::with_capacity(model.n3 * model.n2);
    for d in &delta_out {
        w_output.extend(hidden.iter().map(|h| d * h));
    }

    let delta_hidden: Vec<f64> = (0..model.n2)
        .map(|j| {
            let back: f64 = delta_out.iter().enumerate().map(|(k, d)| d * model.w_output[k * model.n2 + j]).sum();
            back * sigmoid_prime(hidden[j])
        })
        .collect();
    let mut w_hidden = Vec::with_capacity(model.n2 * model.n1);
    for d in &delta_hidden {
        w_hidden.extend(input.iter().map(|x| d * x));
    }

    Ok(Gradients { w_hidden, theta_hidden: delta_hidden, w_output, theta_output: delta_out })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    pub hidden_size: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { learning_rate: 0.1, epochs: 500, seed: 42, hidden_size: 16 }
    }
}

/// Stochastic training: seeded uniform initialization, then `epochs`
/// passes over a freshly shuffled sample order, updating after every
/// sample. The same generator drives initialization and shuffling.
pub fn fit(inputs: &[Vec<f64>], targets: &[Vec<f64>], config: &TrainConfig) -> Result<MlpModel, MlpError> {
    if !(config.learning_rate >= 0.0 && config.learning_rate.is_finite()) {
        return Err(MlpError::InvalidConfig(format!("learning rate {}", config.learning_rate)));
    }
    if config.epochs == 0 {
        return Err(MlpError::InvalidConfig("epochs must be positive".into()));
    }
    if config.hidden_size == 0 {
        return Err(MlpError::InvalidConfig("hidden size must be positive".into()));
    }
    if inputs.is_empty() {
        return Err(MlpError::InvalidConfig("no training samples".into()));
    }
    check_len(inputs.len(), targets.len())?;
    let (n1, n3) = (inputs[0].len(), targets[0].len());

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut model = MlpModel::random(n1, config.hidden_size, n3, &mut rng);
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let grads = backward(&model, &inputs[i], &targets[i])?;
            model.apply(&grads, config.learning_rate);
        }
    }
    Ok(model)
}

/// Index of the largest output, lowest index on ties.
pub fn argmax(values: &[f64]) -> usize {
    values.iter().enumerate().fold(0, |best, (i, &v)| if v > values[best] { i } else { best })
}

pub fn predict_class(model: &MlpModel, input: &[f64]) -> Result<usize, MlpError> {
    Ok(argmax(&forward(model, input)?.output))
}

pub fn one_hot(class: usize, classes: usize) -> Vec<f64> {
    let mut v = vec![0.0; classes];
    v[class] = 1.0;
    v
}

// Text format:
//
//   mlpmodel v1 n1=<n1> n2=<n2> n3=<n3>
//   w_hidden        followed by n2 rows of n1 values
//   theta_hidden    followed by one row of n2 values
//   w_output        followed by n3 rows of n2 values
//   theta_output    followed by one row of n3 values
impl MlpModel {
    pub fn to_text(&self) -> String {
        let row = |v: &[f64]| v.iter().map(|x| sig(*x, 17)).collect::<Vec<_>>().join(" ");
        let mut out = format!("mlpmodel v1 n1={} n2={} n3={}\n", self.n1, self.n2, self.n3);
        out.push_str("w_hidden\n");
        for r in self.w_hidden.chunks_exact(self.n1) {
            out.push_str(&row(r));
            out.push('\n');
        }
        out.push_str("theta_hidden\n");
        out.push_str(&row(&self.theta_hidden));
        out.push_str("\nw_output\n");
        for r in self.w_output.chunks_exact(self.n2) {
            out.push_str(&row(r));
            out.push('\n');
        }
        out.push_str("theta_output\n");
        out.push_str(&row(&self.theta_output));
        out.push('\n');
        out
    }

    /// Parses a model from the front of `lines`, leaving trailing lines.
    pub fn read_lines<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<Self, MlpError> {
        let mut last = 0;
        let mut next = |what: &str| {
            let (n, l) = lines.next().ok_or_else(|| MlpError::Parse { line: last + 1, msg: format!("missing {what}") })?;
            last = n;
            Ok::<_, MlpError>((n, l))
        };
        let (n, header) = next("header")?;
        let err = |line: usize, msg: String| MlpError::Parse { line, msg };
        let mut tok = header.split_whitespace();
        if tok.next() != Some("mlpmodel") || tok.next() != Some("v1") {
            return Err(err(n, "expected `mlpmodel v1` header".into()));
        }
        let mut dims = [0usize; 3];
        for (d, name) in dims.iter_mut().zip(["n1", "n2", "n3"]) {
            *d = tok
                .next()
                .and_then(|t| t.strip_prefix(name)?.strip_prefix('=')?.parse().ok())
                .ok_or_else(|| err(n, format!("missing `{name}=`")))?;
        }
        let [n1, n2, n3] = dims;
        let mut model = MlpModel::zeros(n1, n2, n3);

        let mut block = |name: &str, rows: usize, cols: usize, dst: &mut Vec<f64>| -> Result<(), MlpError> {
            let (n, l) = next(name)?;
            if l.trim() != name {
                return Err(err(n, format!("expected `{name}`")));
            }
            dst.clear();
            for _ in 0..rows {
                let (n, l) = next(name)?;
                let vals: Vec<f64> = l
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|e| err(n, format!("{name}: {e}")))?;
                if vals.len() != cols {
                    return Err(err(n, format!("{name}: expected {cols} values, got {}", vals.len())));
                }
                dst.extend(vals);
            }
            Ok(())
        };
        block("w_hidden", n2, n1, &mut model.w_hidden)?;
        block("theta_hidden", 1, n2, &mut model.theta_hidden)?;
        block("w_output", n3, n2, &mut model.w_output)?;
        block("theta_output", 1, n3, &mut model.theta_output)?;
        Ok(model)
    }

    pub fn from_text(text: &str) -> Result<Self, MlpError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let model = Self::read_lines(&mut lines)?;
        if let Some((line, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(MlpError::Parse { line, msg: "unexpected content after model".into() });
        }
        Ok(model)
    }
}
