//! Validated samples of ascending order statistics.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Where a sample came from, when it was drawn by the model zoo.
#[derive(Debug, Clone, PartialEq)]
pub struct Origin {
    pub model: String,
    pub experiment_seed: u64,
    pub replication: u64,
}

/// Ascending, strictly positive, finite sample with at least two values.
///
/// `values()[0]` is `X_{1:n}` and `values()[n - 1]` is `X_{n:n}`. The data
/// live behind an `Arc`, so clones are cheap and the sample can be shared
/// across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Arc<[f64]>,
    origin: Option<Origin>,
}

impl SortedSample {
    /// Builds a sample from values that are already in ascending order.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        validate(&values)?;
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::Domain(format!(
                "values not ascending at index {}: {} > {}",
                i,
                values[i],
                values[i + 1]
            )));
        }
        Ok(Self {
            values: values.into(),
            origin: None,
        })
    }

    /// Sorts arbitrary raw values and builds a sample.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        validate(&values)?;
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self {
            values: values.into(),
            origin: None,
        })
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = Some(origin);
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; a valid sample holds at least two values.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn origin(&self) -> Option<&Origin> {
        self.origin.as_ref()
    }

    /// `X_{n-j+1:n}`, the `j`-th largest value (1-based).
    pub fn top(&self, j: usize) -> f64 {
        self.values[self.values.len() - j]
    }

    /// Multiplies every value by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("scale factor must be positive, got {c}")));
        }
        Self::from_sorted(self.values.iter().map(|v| v * c).collect())
    }

    /// Checks `1 <= k <= n - 1`.
    pub fn check_k(&self, k: usize) -> Result<()> {
        let n = self.len();
        if k == 0 || k >= n {
            return Err(Error::Range { k, n });
        }
        Ok(())
    }
}

fn validate(values: &[f64]) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::DegenerateSample {
            drawn: values.len(),
            kept: values.len(),
        });
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Domain(format!(
            "sample values must be finite and strictly positive, found {v}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_and_short() {
        assert!(matches!(
            SortedSample::from_sorted(vec![0.0, 1.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            SortedSample::from_unsorted(vec![2.0, -1.0, 3.0]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            SortedSample::from_sorted(vec![1.0]),
            Err(Error::DegenerateSample { .. })
        ));
        assert!(SortedSample::from_unsorted(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn rejects_descending_input() {
        assert!(SortedSample::from_sorted(vec![2.0, 1.0]).is_err());
        let s = SortedSample::from_unsorted(vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(s.top(1), 3.0);
        assert_eq!(s.top(3), 1.0);
    }

    #[test]
    fn k_bounds() {
        let s = SortedSample::from_sorted(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(s.check_k(0).is_err());
        assert!(s.check_k(1).is_ok());
        assert!(s.check_k(2).is_ok());
        assert_eq!(s.check_k(3), Err(Error::Range { k: 3, n: 3 }));
    }
}
