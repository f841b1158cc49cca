//! Exact free moment/cumulant arithmetic.
//!
//! Free cumulants linearize free additive convolution: κ_n(X + Y) =
//! κ_n(X) + κ_n(Y) for free X, Y, and κ_n(cX) = c^n κ_n(X). That makes
//! this module an exact side-channel oracle for the analytic convolution
//! engine: convert input moments to cumulants, combine, convert back, and
//! compare against quadrature moments of the computed density.
//!
//! The conversion uses the moment-cumulant recursion over non-crossing
//! partitions,
//!
//! `m_n = Σ_{k=1..n} κ_k · Σ_{i_1+…+i_k = n-k} m_{i_1} ⋯ m_{i_k}`,
//!
//! which is exact in floating point for the orders kept here.

use crate::measure::MomentVector;
use crate::{Error, Result};

/// Highest cumulant/moment order supported by the conversions.
pub const MAX_ORDER: usize = 16;

/// Free cumulants `kappa[n-1] = κ_n` for `n = 1..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantVector {
    pub kappa: Vec<f64>,
}

impl CumulantVector {
    pub fn order(&self) -> usize {
        self.kappa.len()
    }

    /// `κ_n` with the mathematical 1-based index.
    pub fn get(&self, n: usize) -> f64 {
        self.kappa[n - 1]
    }
}

fn check_order(k: usize) -> Result<()> {
    if k > MAX_ORDER {
        Err(Error::OrderTooHigh {
            order: k,
            max: MAX_ORDER,
        })
    } else {
        Ok(())
    }
}

/// Weight `Σ_{i_1+…+i_k = s, i_j ≥ 0} m_{i_1} ⋯ m_{i_k}` with `m_0 = 1`,
/// i.e. the coefficient of the k-th power of the moment series.
fn composition_weight(m: &[f64], s: usize, k: usize) -> f64 {
    // conv[t] holds the t-th coefficient of (1 + m_1 x + m_2 x^2 + …)^j.
    let mut conv = vec![0.0; s + 1];
    conv[0] = 1.0;
    for _ in 0..k {
        let mut next = vec![0.0; s + 1];
        for (t, &c) in conv.iter().enumerate().filter(|&(_, &c)| c != 0.0) {
            for i in 0..=(s - t) {
                let mi = if i == 0 { 1.0 } else { m[i - 1] };
                next[t + i] += c * mi;
            }
        }
        conv = next;
    }
    conv[s]
}

/// Inverts the free moment-cumulant relation.
pub fn moments_to_free_cumulants(m: &MomentVector) -> Result<CumulantVector> {
    check_order(m.order())?;
    let k_max = m.order();
    let mut kappa = Vec::with_capacity(k_max);
    for n in 1..=k_max {
        // m_n = κ_n + Σ_{k<n} κ_k · W(n-k, k); the κ_n coefficient is 1.
        let mut rest = 0.0;
        for (k, &kap) in kappa.iter().enumerate() {
            let k = k + 1;
            rest += kap * composition_weight(&m.m, n - k, k);
        }
        kappa.push(m.m[n - 1] - rest);
    }
    Ok(CumulantVector { kappa })
}

/// Forward evaluation of the free moment-cumulant relation; exact inverse of
/// [`moments_to_free_cumulants`].
pub fn free_cumulants_to_moments(k: &CumulantVector) -> Result<MomentVector> {
    check_order(k.order())?;
    let n_max = k.order();
    let mut m: Vec<f64> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut total = 0.0;
        for j in 1..=n {
            total += k.kappa[j - 1] * composition_weight(&m, n - j, j);
        }
        m.push(total);
    }
    Ok(MomentVector { m })
}

/// Exact moments of `Σ a_i X_i` for freely independent `X_i` with the given
/// moments, via cumulant additivity `κ_n(Σ a_i X_i) = Σ a_i^n κ_n(X_i)`.
pub fn weighted_sum_moments_oracle(
    moment_vectors: &[MomentVector],
    a: &[f64],
    k: usize,
) -> Result<MomentVector> {
    check_order(k)?;
    if moment_vectors.len() != a.len() {
        return Err(Error::InvalidCoefficients(format!(
            "{} moment vectors but {} coefficients",
            moment_vectors.len(),
            a.len()
        )));
    }
    for mv in moment_vectors {
        if mv.order() < k {
            return Err(Error::InvalidCoefficients(format!(
                "need moments up to order {k}, got {}",
                mv.order()
            )));
        }
    }
    let mut kappa = vec![0.0; k];
    for (mv, &ai) in moment_vectors.iter().zip(a) {
        let truncated = MomentVector {
            m: mv.m[..k].to_vec(),
        };
        let ki = moments_to_free_cumulants(&truncated)?;
        for (n, kap) in kappa.iter_mut().enumerate() {
            *kap += ai.powi(n as i32 + 1) * ki.kappa[n];
        }
    }
    free_cumulants_to_moments(&CumulantVector { kappa })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force evaluation of `m_n = Σ_{π ∈ NC(n)} Π_B κ_{|B|}` by
    /// enumerating all set partitions and filtering out crossing ones.
    /// Independent of the recursion above; used to certify it for n ≤ 6.
    mod brute {
        /// Generates every partition of {0..n-1} as block-index assignments.
        fn partitions(n: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut assign = vec![0usize; n];
            fn rec(i: usize, n_blocks: usize, assign: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if i == assign.len() {
                    out.push(assign.clone());
                    return;
                }
                for b in 0..=n_blocks {
                    assign[i] = b;
                    rec(
                        i + 1,
                        n_blocks.max(b + 1),
                        assign,
                        out,
                    );
                }
            }
            rec(0, 0, &mut assign, &mut out);
            out
        }

        /// π is crossing iff there are a < b < c < d with a,c in one block
        /// and b,d in a different one.
        fn is_crossing(assign: &[usize]) -> bool {
            let n = assign.len();
            for a in 0..n {
                for b in (a + 1)..n {
                    for c in (b + 1)..n {
                        for d in (c + 1)..n {
                            if assign[a] == assign[c]
                                && assign[b] == assign[d]
                                && assign[a] != assign[b]
                            {
                                return true;
                            }
                        }
                    }
                }
            }
            false
        }

        pub fn moment_from_cumulants(kappa: &[f64], n: usize) -> f64 {
            let mut total = 0.0;
            for assign in partitions(n) {
                if is_crossing(&assign) {
                    continue;
                }
                let n_blocks = assign.iter().max().unwrap() + 1;
                let mut sizes = vec![0usize; n_blocks];
                for &b in &assign {
                    sizes[b] += 1;
                }
                total += sizes.iter().map(|&s| kappa[s - 1]).product::<f64>();
            }
            total
        }
    }

    #[test]
    fn recursion_matches_brute_force_enumeration() {
        // Deterministic "random" cumulant vectors in [-1, 1].
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..25 {
            let kappa: Vec<f64> = (0..6).map(|_| next()).collect();
            let m = free_cumulants_to_moments(&CumulantVector {
                kappa: kappa.clone(),
            })
            .unwrap();
            for n in 1..=6 {
                let expected = brute::moment_from_cumulants(&kappa, n);
                assert!(
                    (m.m[n - 1] - expected).abs() < 1e-12,
                    "n={n}: recursion {} vs enumeration {expected}",
                    m.m[n - 1]
                );
            }
        }
    }

    #[test]
    fn semicircle_has_only_second_cumulant() {
        let m = MomentVector {
            m: vec![0.0, 1.0, 0.0, 2.0, 0.0, 5.0],
        };
        let k = moments_to_free_cumulants(&m).unwrap();
        let expected = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        for (n, &e) in expected.iter().enumerate() {
            assert!(
                (k.kappa[n] - e).abs() < 1e-12,
                "κ_{} = {}",
                n + 1,
                k.kappa[n]
            );
        }
    }

    #[test]
    fn bernoulli_cumulants() {
        let m = MomentVector {
            m: vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0],
        };
        let k = moments_to_free_cumulants(&m).unwrap();
        let expected = [0.0, 1.0, 0.0, -1.0, 0.0, 2.0];
        for (n, &e) in expected.iter().enumerate() {
            assert!(
                (k.kappa[n] - e).abs() < 1e-12,
                "κ_{} = {}",
                n + 1,
                k.kappa[n]
            );
        }
    }

    #[test]
    fn point_mass_has_only_first_cumulant() {
        let c = 0.7;
        let m = MomentVector {
            m: (1..=8).map(|k| c_pow(c, k)).collect(),
        };
        let k = moments_to_free_cumulants(&m).unwrap();
        assert!((k.kappa[0] - c).abs() < 1e-12);
        for n in 2..=8 {
            assert!(k.kappa[n - 1].abs() < 1e-12, "κ_{n} = {}", k.kappa[n - 1]);
        }

        let back = free_cumulants_to_moments(&k).unwrap();
        for n in 1..=8 {
            assert!((back.m[n - 1] - c_pow(c, n)).abs() < 1e-12);
        }
    }

    fn c_pow(c: f64, k: usize) -> f64 {
        c.powi(k as i32)
    }

    #[test]
    fn semicircle_cumulant_generates_catalan_moments() {
        let k = CumulantVector {
            kappa: vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        };
        let m = free_cumulants_to_moments(&k).unwrap();
        let catalan = [0.0, 1.0, 0.0, 2.0, 0.0, 5.0, 0.0, 14.0];
        for (n, &e) in catalan.iter().enumerate() {
            assert!((m.m[n] - e).abs() < 1e-12);
        }
    }

    #[test]
    fn order_cap_enforced() {
        let m = MomentVector { m: vec![0.0; 17] };
        assert!(matches!(
            moments_to_free_cumulants(&m),
            Err(Error::OrderTooHigh { .. })
        ));
    }

    #[test]
    fn oracle_arcsine_from_two_bernoullis() {
        let bern = MomentVector {
            m: vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0],
        };
        let arcsine =
            weighted_sum_moments_oracle(&[bern.clone(), bern.clone()], &[1.0, 1.0], 6).unwrap();
        let expected = [0.0, 2.0, 0.0, 6.0, 0.0, 20.0];
        for (n, &e) in expected.iter().enumerate() {
            assert!((arcsine.m[n] - e).abs() < 1e-12, "m_{}", n + 1);
        }

        let inv_sqrt2 = 1.0 / std::f64::consts::SQRT_2;
        let scaled =
            weighted_sum_moments_oracle(&[bern.clone(), bern], &[inv_sqrt2, inv_sqrt2], 6).unwrap();
        let expected = [0.0, 1.0, 0.0, 1.5, 0.0, 2.5];
        for (n, &e) in expected.iter().enumerate() {
            assert!((scaled.m[n] - e).abs() < 1e-12, "m_{}", n + 1);
        }
    }

    #[test]
    fn oracle_semicircle_clt_fixed_point() {
        let semi = MomentVector {
            m: vec![0.0, 1.0, 0.0, 2.0, 0.0, 5.0, 0.0, 14.0],
        };
        for n in [2usize, 3, 7] {
            let a = vec![1.0 / (n as f64).sqrt(); n];
            let mvs = vec![semi.clone(); n];
            let out = weighted_sum_moments_oracle(&mvs, &a, 8).unwrap();
            for (j, &e) in semi.m.iter().enumerate() {
                assert!(
                    (out.m[j] - e).abs() < 1e-12,
                    "n={n}, m_{} = {}",
                    j + 1,
                    out.m[j]
                );
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            // Conversions are exact inverses of each other.
            #[test]
            fn roundtrip_is_identity(kappa in proptest::collection::vec(-1.0f64..1.0, 1..=10)) {
                let k = CumulantVector { kappa };
                let m = free_cumulants_to_moments(&k).unwrap();
                let back = moments_to_free_cumulants(&m).unwrap();
                for (a, b) in k.kappa.iter().zip(&back.kappa) {
                    prop_assert!((a - b).abs() < 1e-10);
                }
            }

            // Oracle of a pair equals cumulant addition (free convolution).
            #[test]
            fn oracle_is_additive(
                k1 in proptest::collection::vec(-0.5f64..0.5, 6),
                k2 in proptest::collection::vec(-0.5f64..0.5, 6),
            ) {
                let m1 = free_cumulants_to_moments(&CumulantVector { kappa: k1.clone() }).unwrap();
                let m2 = free_cumulants_to_moments(&CumulantVector { kappa: k2.clone() }).unwrap();
                let via_oracle = weighted_sum_moments_oracle(&[m1, m2], &[1.0, 1.0], 6).unwrap();
                let sum = CumulantVector {
                    kappa: k1.iter().zip(&k2).map(|(a, b)| a + b).collect(),
                };
                let direct = free_cumulants_to_moments(&sum).unwrap();
                for (a, b) in via_oracle.m.iter().zip(&direct.m) {
                    prop_assert!((a - b).abs() < 1e-12);
                }
            }
        }
    }
}
