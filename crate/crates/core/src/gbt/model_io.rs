//! Text model format.
//!
//! ```text
//! gbtmodel v1 K=<classes> M=<rounds> eta=<eta>
//! <tree for round 0, class 0>
//! <tree for round 0, class 1>
//! ...
//! ```
//!
//! Each tree is one line of pre-order tokens: `S <feature> <threshold> <L|R>`
//! for a split (followed by its left then right subtree) and `L <weight>`
//! for a leaf. Floats carry 17 significant digits, so parsing a written
//! model reproduces it bit for bit.

use std::str::SplitWhitespace;

use super::booster::BoostedEnsemble;
use super::split::Direction;
use super::tree::TreeNode;
use super::GbtError;
use crate::numfmt::sig;

const MAGIC: &str = "gbtmodel";
const VERSION: &str = "v1";

impl BoostedEnsemble {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{MAGIC} {VERSION} K={} M={} eta={}\n",
            self.num_outputs(),
            self.rounds(),
            sig(self.eta(), 17)
        );
        for tree in self.trees().iter().flatten() {
            let mut line = String::new();
            write_node(tree, &mut line);
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    /// Parses a model from the front of `lines`, leaving any trailing lines
    /// unconsumed.
    pub fn read_lines<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<Self, GbtError> {
        let (lineno, header) = lines.next().ok_or(GbtError::Parse { line: 1, msg: "empty model file".into() })?;
        let err = |line: usize, msg: String| GbtError::Parse { line, msg };
        let mut tok = header.split_whitespace();
        if tok.next() != Some(MAGIC) || tok.next() != Some(VERSION) {
            return Err(err(lineno, format!("expected `{MAGIC} {VERSION}` header")));
        }
        let mut field = |name: &str| -> Result<&str, GbtError> {
            tok.next()
                .and_then(|t| t.strip_prefix(name))
                .and_then(|t| t.strip_prefix('='))
                .ok_or_else(|| err(lineno, format!("missing `{name}=` field")))
        };
        let k: usize = field("K")?.parse().map_err(|e| err(lineno, format!("K: {e}")))?;
        let m: usize = field("M")?.parse().map_err(|e| err(lineno, format!("M: {e}")))?;
        let eta: f64 = field("eta")?.parse().map_err(|e| err(lineno, format!("eta: {e}")))?;

        let mut trees = Vec::with_capacity(m);
        for _ in 0..m {
            let mut round = Vec::with_capacity(k);
            for _ in 0..k {
                let (lineno, line) = lines.next().ok_or_else(|| err(lineno + 1, "missing tree line".into()))?;
                let mut tokens = line.split_whitespace();
                let tree = read_node(&mut tokens).map_err(|msg| err(lineno, msg))?;
                if tokens.next().is_some() {
                    return Err(err(lineno, "trailing tokens after tree".into()));
                }
                round.push(tree);
            }
            trees.push(round);
        }
        BoostedEnsemble::from_trees(k, eta, trees)
    }

    pub fn from_text(text: &str) -> Result<Self, GbtError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let model = Self::read_lines(&mut lines)?;
        if let Some((line, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(GbtError::Parse { line, msg: "unexpected content after last tree".into() });
        }
        Ok(model)
    }
}

fn write_node(node: &TreeNode, out: &mut String) {
    match node {
        TreeNode::Leaf { weight } => {
            out.push_str("L ");
            out.push_str(&sig(*weight, 17));
            out.push(' ');
        }
        TreeNode::Split { feature, threshold, default_direction, left, right } => {
            let dir = match default_direction {
                Direction::Left => 'L',
                Direction::Right => 'R',
            };
            out.push_str(&format!("S {feature} {} {dir} ", sig(*threshold, 17)));
            write_node(left, out);
            write_node(right, out);
        }
    }
}

fn read_node(tokens: &mut SplitWhitespace<'_>) -> Result<TreeNode, String> {
    let mut next = |what: &str| tokens.next().ok_or_else(|| format!("truncated tree: expected {what}"));
    match next("node tag")? {
        "L" => {
            let weight = next("leaf weight")?.parse().map_err(|e| format!("leaf weight: {e}"))?;
            Ok(TreeNode::Leaf { weight })
        }
        "S" => {
            let feature = next("feature")?.parse().map_err(|e| format!("feature: {e}"))?;
            let threshold = next("threshold")?.parse().map_err(|e| format!("threshold: {e}"))?;
            let default_direction = match next("direction")? {
                "L" => Direction::Left,
                "R" => Direction::Right,
                other => return Err(format!("bad direction `{other}`")),
            };
            let left = Box::new(read_node(tokens)?);
            let right = Box::new(read_node(tokens)?);
            Ok(TreeNode::Split { feature, threshold, default_direction, left, right })
        }
        other => Err(format!("bad node tag `{other}`")),
    }
}
