//! Exact enumeration: trees, forests, histories and the conjugation walk.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::tree::{Arity, OrderedTree};

pub type BigCount = BigUint;

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    binomial(BigUint::from(n), BigUint::from(k))
}

/// Number of full trees with `n_internal` internal nodes:
/// `C(dn, n) / ((d-1)n + 1)`.
pub fn count_trees(arity: Arity, n_internal: u64) -> BigCount {
    let d = arity.degree() as u64;
    binom(d * n_internal, n_internal) / BigUint::from((d - 1) * n_internal + 1)
}

/// Number of ordered forests of `m_roots` full trees with `n_nodes` nodes in
/// total. Zero whenever the binomial argument is not a nonnegative integer;
/// the empty forest counts once.
pub fn count_forests(arity: Arity, m_roots: u64, n_nodes: u64) -> BigCount {
    if n_nodes == 0 {
        return if m_roots == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    if m_roots == 0 || m_roots > n_nodes {
        return BigUint::zero();
    }
    let k = match arity {
        Arity::Binary => {
            if !(n_nodes + m_roots).is_multiple_of(2) {
                return BigUint::zero();
            }
            (n_nodes + m_roots) / 2
        }
        Arity::Ternary => {
            if !(n_nodes - m_roots).is_multiple_of(3) {
                return BigUint::zero();
            }
            (n_nodes - m_roots) / 3
        }
    };
    binom(n_nodes, k) * BigUint::from(m_roots) / BigUint::from(n_nodes)
}

/// Natural log of [`count_forests`]; `-inf` when the count is zero.
pub fn ln_count_forests(arity: Arity, m_roots: u64, n_nodes: u64) -> f64 {
    if n_nodes == 0 {
        return if m_roots == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if m_roots == 0 || m_roots > n_nodes {
        return f64::NEG_INFINITY;
    }
    let k = match arity {
        Arity::Binary if (n_nodes + m_roots).is_multiple_of(2) => (n_nodes + m_roots) / 2,
        Arity::Ternary if (n_nodes - m_roots).is_multiple_of(3) => (n_nodes - m_roots) / 3,
        _ => return f64::NEG_INFINITY,
    };
    statrs::function::factorial::ln_binomial(n_nodes, k) + (m_roots as f64).ln()
        - (n_nodes as f64).ln()
}

/// Total number of growth histories with `k` insertions in a ternary tree,
/// `N_k = 1·3·5···(2k-1)`.
pub fn histories_total(k: u64) -> BigCount {
    histories_total_for(Arity::Ternary, k)
}

/// Leaves go up by `d - 1` at each step, so `N_k = ∏_{i<k} ((d-1)i + 1)`;
/// `k!` in the binary case.
pub fn histories_total_for(arity: Arity, k: u64) -> BigCount {
    let d = arity.degree() as u64;
    (0..k).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from((d - 1) * i + 1)
    })
}

/// Number of increasing labelings of the internal nodes of `t`, by the
/// hook-length formula `n! / ∏ |internal subtree at v|`.
pub fn count_histories(t: &OrderedTree) -> BigCount {
    let sizes = t.internal_subtree_sizes();
    let n = t.n_internal() as u64;
    let num = (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i));
    let den = t.internal_ids().fold(BigUint::one(), |acc, id| {
        acc * BigUint::from(sizes[id as usize])
    });
    num / den
}

/// `P(Z_m = -k)` for the walk with steps `+2` (prob 1/3) and `-1` (prob 2/3).
pub fn q_walk(m: u64, k: u64) -> BigRational {
    if k > m || !(m - k).is_multiple_of(3) {
        return BigRational::zero();
    }
    let p = (m - k) / 3;
    let num = BigInt::from(binom(m, p)) * BigInt::from(2u32).pow((m - p) as u32);
    let den = BigInt::from(3u32).pow(m as u32);
    BigRational::new(num, den)
}

pub fn q_walk_f64(m: u64, k: u64) -> f64 {
    ratio_to_f64(&q_walk(m, k))
}

/// Nearest double of a rational, robust to huge numerators and denominators.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64 - 60;
    let scaled = if shift >= 0 {
        r.numer().clone() / (r.denom().clone() << shift as usize)
    } else {
        (r.numer().clone() << (-shift) as usize) / r.denom().clone()
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::enumerate_trees;

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn tree_counts() {
        let ter: Vec<BigUint> = (0..=5).map(|n| count_trees(Arity::Ternary, n)).collect();
        assert_eq!(ter, [1u64, 1, 3, 12, 55, 273].map(u));
        assert_eq!(count_trees(Arity::Binary, 3), u(5));
        for n in 0..=6 {
            assert_eq!(
                count_trees(Arity::Ternary, n),
                u(enumerate_trees(Arity::Ternary, n as usize).unwrap().len() as u64)
            );
        }
        for n in 0..=8 {
            assert_eq!(
                count_trees(Arity::Binary, n),
                u(enumerate_trees(Arity::Binary, n as usize).unwrap().len() as u64)
            );
        }
    }

    #[test]
    fn forest_counts() {
        assert_eq!(count_forests(Arity::Binary, 3, 3), u(1));
        assert_eq!(count_forests(Arity::Binary, 3, 5), u(3));
        assert_eq!(count_forests(Arity::Ternary, 1, 4), u(1));
        assert_eq!(count_forests(Arity::Ternary, 1, 5), u(0));
        assert_eq!(count_forests(Arity::Ternary, 0, 0), u(1));
        assert_eq!(count_forests(Arity::Ternary, 0, 3), u(0));
        for n in 0..10 {
            assert_eq!(
                count_forests(Arity::Ternary, 1, 3 * n + 1),
                count_trees(Arity::Ternary, n)
            );
            assert_eq!(
                count_forests(Arity::Binary, 1, 2 * n + 1),
                count_trees(Arity::Binary, n)
            );
        }
    }

    #[test]
    fn forests_by_brute_force() {
        // ordered forests of m trees with n nodes, from the tree counts
        fn brute(arity: Arity, m: u64, n: u64) -> BigUint {
            if m == 0 {
                return if n == 0 {
                    BigUint::one()
                } else {
                    BigUint::zero()
                };
            }
            let d = arity.degree() as u64;
            let mut total = BigUint::zero();
            let mut k = 0;
            while d * k < n {
                total += count_trees(arity, k) * brute(arity, m - 1, n - (d * k + 1));
                k += 1;
            }
            total
        }
        for arity in [Arity::Binary, Arity::Ternary] {
            for m in 1..5 {
                for n in m..16 {
                    assert_eq!(
                        count_forests(arity, m, n),
                        brute(arity, m, n),
                        "{arity:?} {m} {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn history_totals() {
        assert_eq!(histories_total(1), u(1));
        assert_eq!(histories_total(3), u(15));
        assert_eq!(histories_total_for(Arity::Binary, 4), u(24));
        for k in 0..=6u64 {
            let sum: BigUint = enumerate_trees(Arity::Ternary, k as usize)
                .unwrap()
                .iter()
                .map(count_histories)
                .sum();
            assert_eq!(sum, histories_total(k));
        }
    }

    #[test]
    fn hook_lengths() {
        use crate::word::w;
        let t = OrderedTree::from_internal_words(Arity::Ternary, &[w("")]).unwrap();
        assert_eq!(count_histories(&t), u(1));
        let t = OrderedTree::from_internal_words(Arity::Ternary, &[w(""), w("1"), w("2")]).unwrap();
        assert_eq!(count_histories(&t), u(2));
        let t =
            OrderedTree::from_internal_words(Arity::Ternary, &[w(""), w("1"), w("11")]).unwrap();
        assert_eq!(count_histories(&t), u(1));
    }

    #[test]
    fn walk_probabilities() {
        assert_eq!(q_walk(1, 1), r(2, 3));
        assert_eq!(q_walk(4, 1), r(32, 81));
        assert_eq!(q_walk(4, 2), r(0, 1));
        // brute force over all 3^m weighted step sequences
        for m in 1..=12u64 {
            let mut dist = std::collections::HashMap::<i64, BigRational>::new();
            for mask in 0..(1u64 << m) {
                let ups = mask.count_ones() as i64;
                let pos = 2 * ups - (m as i64 - ups);
                let w = BigRational::new(
                    BigInt::from(2u32).pow(m as u32 - ups as u32),
                    BigInt::from(3u32).pow(m as u32),
                );
                *dist.entry(pos).or_insert_with(BigRational::zero) += w;
            }
            for k in 1..=m {
                let want = dist
                    .get(&-(k as i64))
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                assert_eq!(q_walk(m, k), want, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn walk_and_forest_identity() {
        // conjugation: F_ter^k(m) = (k/m) C(m, (m-k)/3), and
        // q(m,k) = C(m,p) (1/3)^p (2/3)^(m-p) share the binomial factor
        for m in 1..=12u64 {
            for k in 1..=m {
                let f =
                    BigRational::from_integer(BigInt::from(count_forests(Arity::Ternary, k, m)));
                if (m - k) % 3 != 0 {
                    assert!(f.is_zero());
                    continue;
                }
                let p = (m - k) / 3;
                let weight = BigRational::new(
                    BigInt::from(2u32).pow((m - p) as u32),
                    BigInt::from(3u32).pow(m as u32),
                );
                let lhs = f * weight;
                let rhs = q_walk(m, k) * r(k as i64, m as i64);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn big_ratio_conversion() {
        let x = BigRational::new(
            BigInt::from(1) << 3000usize,
            (BigInt::from(3) << 3000usize) + 1,
        );
        assert!((ratio_to_f64(&x) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(ratio_to_f64(&r(1, 4)), 0.25);
    }
}
