//! Closed-form leakage after depolarizing noise.

use crate::error::{Error, Result};

fn check(q_bits: f64, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if !(q_bits >= 0.0 && q_bits.is_finite()) {
        return Err(Error::InvalidArgument(format!("leakage must be a finite non-negative number, got {q_bits}")));
    }
    Ok(())
}

/// Exact leakage after the global depolarizing channel: `log₂(p + (1−p)·2^q)`.
pub fn noisy_leakage_global(q_bits: f64, p: f64) -> Result<f64> {
    check(q_bits, p)?;
    Ok((p + (1.0 - p) * q_bits.exp2()).log2())
}

/// Upper bound after `k` qubits of local depolarizing noise:
/// `log₂(p^k + (1−p^k)·2^q)`.
pub fn noisy_leakage_local_bound(q_bits: f64, p: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    check(q_bits, p)?;
    let pk = p.powi(k as i32);
    Ok((pk + (1.0 - pk) * q_bits.exp2()).log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn global_values() {
        assert_eq!(noisy_leakage_global(3.0, 0.0).unwrap(), 3.0);
        assert_eq!(noisy_leakage_global(3.0, 1.0).unwrap(), 0.0);
        assert!((noisy_leakage_global(3.0, 0.5).unwrap() - 4.5f64.log2()).abs() < 1e-15);
        assert!((noisy_leakage_global(3.0, 0.5).unwrap() - 2.169925).abs() < 1e-6);
    }

    #[test]
    fn local_values() {
        for p in [0.0, 0.2, 0.7, 1.0] {
            assert_eq!(noisy_leakage_local_bound(2.3, p, 1).unwrap(), noisy_leakage_global(2.3, p).unwrap());
        }
        for k in 1..5 {
            assert_eq!(noisy_leakage_local_bound(3.0, 1.0, k).unwrap(), 0.0);
        }
        let v = noisy_leakage_local_bound(3.0, 0.5, 2).unwrap();
        assert!((v - 6.25f64.log2()).abs() < 1e-15);
        assert!((v - 2.643856).abs() < 1e-6);
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(noisy_leakage_global(1.0, 1.2), Err(Error::InvalidProbability(_))));
        assert!(noisy_leakage_global(-0.5, 0.2).is_err());
        assert!(noisy_leakage_local_bound(1.0, 0.2, 0).is_err());
    }

    #[test]
    fn strictly_decreasing_in_p() {
        for q in [0.01, 0.5, 1.0, 3.0] {
            let vals: Vec<f64> = (0..=100).map(|i| noisy_leakage_global(q, i as f64 / 100.0).unwrap()).collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]), "q={q}");
            let local: Vec<f64> =
                (0..=100).map(|i| noisy_leakage_local_bound(q, i as f64 / 100.0, 3).unwrap()).collect();
            assert!(local.windows(2).all(|w| w[1] <= w[0]), "q={q}");
        }
        let flat: Vec<f64> = (0..=10).map(|i| noisy_leakage_global(0.0, i as f64 / 10.0).unwrap()).collect();
        assert!(flat.iter().all(|&v| v == 0.0));
    }
}
