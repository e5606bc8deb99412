use crate::features::NUM_FEATURES;

/// Per-feature min/max of the training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationSpec {
    pub min: [f64; NUM_FEATURES],
    pub max: [f64; NUM_FEATURES],
}

impl NormalizationSpec {
    /// Panics on an empty training set.
    pub fn fit(rows: &[[f64; NUM_FEATURES]]) -> Self {
        assert!(!rows.is_empty(), "cannot fit normalization on zero rows");
        let mut spec = NormalizationSpec { min: rows[0], max: rows[0] };
        for r in &rows[1..] {
            for ((lo, hi), v) in spec.min.iter_mut().zip(&mut spec.max).zip(r) {
                *lo = lo.min(*v);
                *hi = hi.max(*v);
            }
        }
        spec
    }

    /// Min-max scaling clamped to `[0, 1]`; constant features map to 0.5.
    pub fn apply(&self, row: &[f64; NUM_FEATURES]) -> [f64; NUM_FEATURES] {
        let mut out = [0.5; NUM_FEATURES];
        for j in 0..NUM_FEATURES {
            let span = self.max[j] - self.min[j];
            if span > 0.0 {
                out[j] = ((row[j] - self.min[j]) / span).clamp(0.0, 1.0);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn col(v: f64) -> [f64; NUM_FEATURES] {
        [v, 3.0, v, v, v, v, v, v]
    }

    #[test]
    fn midpoint_clamp_and_constant() {
        let spec = NormalizationSpec::fit(&[col(0.0), col(10.0)]);
        assert_eq!(spec.apply(&col(5.0))[0], 0.5);
        assert_eq!(spec.apply(&col(12.0))[0], 1.0);
        assert_eq!(spec.apply(&col(-1.0))[0], 0.0);
        assert_eq!(spec.apply(&col(5.0))[1], 0.5);
        assert_eq!(spec.apply(&[99.0; NUM_FEATURES])[1], 0.5);
    }

    proptest! {
        #[test]
        fn output_in_unit_interval(
            train in prop::collection::vec(prop::array::uniform8(-1e6f64..1e6), 1..20),
            x in prop::array::uniform8(-1e7f64..1e7),
        ) {
            let spec = NormalizationSpec::fit(&train);
            for v in spec.apply(&x) {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }
}
