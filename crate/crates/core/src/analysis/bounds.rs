//! Closed-form upper and lower bounds, evaluated in saturating `u128`
//! arithmetic. Each bound carries a stable anchor string used in reports.

use serde::{Deserialize, Serialize};

/// How a bound is to be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Measured value must not exceed the bound.
    Upper,
    /// Measured value must reach the bound.
    Lower,
    /// Ratio reported as evidence only; never a failure.
    Heuristic,
}

pub const NC_BOUNDED_TREEWIDTH: &str = "NC_bounded_treewidth";
pub const NC_PLANAR_DEGREE_16: &str = "NC_planar_degree_16";
pub const NC_PLANAR_DEGREE_6: &str = "NC_planar_degree_6";
pub const NC_PLANAR_DEGREE_4: &str = "NC_planar_degree_4";
pub const NC_KT_MINOR_FREE: &str = "NC_Kt_Minor_free";
pub const PROFILES_POLYNOMIAL_IN_A: &str = "bound_polynomial_in_A_profiles";
pub const TRACES_POLYNOMIAL_IN_A: &str = "bound_polynomial_in_A";
pub const PROFILES_OUTER_FACE: &str = "bound_profiles_outer_face";
pub const VC_DIM_KT_MINOR_FREE: &str = "VC_dim_Kt_minor_free";
pub const VC_DIM_OUTER_FACE: &str = "VC_dim_outer_face_at_most_3";
pub const GUARDING_BOUNDED_TREEWIDTH: &str = "guarding_bounded_treewidth";
pub const GUARDING_PRODUCT: &str = "guarding_product_general_form";
pub const WCOL_BOUNDED_TW: &str = "wcol_bounded_tw";
pub const CONSTRUCTION_BOUNDED_TREEWIDTH: &str = "construction_bounded_treewidth";
pub const CONSTRUCTION_1_PLANAR: &str = "construction_1_planar";
pub const METRIC_DIMENSION: &str = "metric_dimension";

/// Every anchor the harness understands.
pub const ALL_ANCHORS: &[&str] = &[
    NC_BOUNDED_TREEWIDTH,
    NC_PLANAR_DEGREE_16,
    NC_PLANAR_DEGREE_6,
    NC_PLANAR_DEGREE_4,
    NC_KT_MINOR_FREE,
    PROFILES_POLYNOMIAL_IN_A,
    TRACES_POLYNOMIAL_IN_A,
    PROFILES_OUTER_FACE,
    VC_DIM_KT_MINOR_FREE,
    VC_DIM_OUTER_FACE,
    GUARDING_BOUNDED_TREEWIDTH,
    GUARDING_PRODUCT,
    WCOL_BOUNDED_TW,
    CONSTRUCTION_BOUNDED_TREEWIDTH,
    CONSTRUCTION_1_PLANAR,
    METRIC_DIMENSION,
];

fn pow(base: u128, e: u64) -> u128 {
    base.saturating_pow(e.min(u32::MAX as u64) as u32)
}

fn mul(xs: &[u128]) -> u128 {
    xs.iter().fold(1u128, |acc, &x| acc.saturating_mul(x))
}

/// `C(n, k)`, saturating.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        match acc.checked_mul((n - i) as u128) {
            Some(x) => acc = x / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// `(t+1)(r+2)^t C(r+t, t) |A|` profiles for treewidth at most `t`.
pub fn nc_bounded_treewidth(t: u64, r: u64, a: u64) -> u128 {
    mul(&[t as u128 + 1, pow(r as u128 + 2, t), binom(r + t, t), a as u128])
}

/// `10^8 (r+1)^11 |A|` profiles in planar graphs.
pub fn nc_planar_degree_16(r: u64, a: u64) -> u128 {
    mul(&[100_000_000, pow(r as u128 + 1, 11), a as u128])
}

/// `10^8 (r+1)^6 |A|` profiles in planar graphs.
pub fn nc_planar_degree_6(r: u64, a: u64) -> u128 {
    mul(&[100_000_000, pow(r as u128 + 1, 6), a as u128])
}

/// `(2^t (t-3))^t (r+1)^{t²-1} |A|` profiles for `K_t`-minor-free graphs,
/// `t ≥ 4`. Returns `None` below that.
pub fn nc_kt_minor_free(t: u64, r: u64, a: u64) -> Option<u128> {
    (t >= 4).then(|| {
        let base = pow(2, t).saturating_mul(t as u128 - 3);
        mul(&[pow(base, t), pow(r as u128 + 1, t * t - 1), a as u128])
    })
}

/// `(r+1)^{t-1} |A|^{t-1}` profiles for `K_t`-minor-free graphs, `t ≥ 3`.
pub fn profiles_polynomial_in_a(t: u64, r: u64, a: u64) -> Option<u128> {
    (t >= 3).then(|| mul(&[pow(r as u128 + 1, t - 1), pow(a as u128, t - 1)]))
}

/// `|A|^{t-1}` traces for `K_t`-minor-free graphs, `t ≥ 3`. The underlying
/// counting argument needs `|A| ≥ 2`, so `None` is returned for smaller
/// target sets.
pub fn traces_polynomial_in_a(t: u64, a: u64) -> Option<u128> {
    (t >= 3 && a >= 2).then(|| pow(a as u128, t - 1))
}

/// `(r+1)^3 |A|^3` profiles when `A` lies on the outer face.
pub fn profiles_outer_face(r: u64, a: u64) -> u128 {
    mul(&[pow(r as u128 + 1, 3), pow(a as u128, 3)])
}

/// `(t+1) C(r+t, t) |A|` sets in the tree-decomposition guarding family.
pub fn guarding_td_family(t: u64, r: u64, a: u64) -> u128 {
    mul(&[t as u128 + 1, binom(r + t, t), a as u128])
}

/// `C(r+t, t)` vertices weakly `r`-reachable from any vertex under an
/// order compatible with a width-`t` decomposition.
pub fn wcol_bounded_tw(t: u64, r: u64) -> u128 {
    binom(r + t, t)
}

/// `4c(t+1)r` vertices per product guarding set.
pub fn guarding_product_member(c: u64, t: u64, r: u64) -> u128 {
    mul(&[4, c as u128, t as u128 + 1, r as u128])
}

/// `2 C(r+t, t) |A|` sets in the product guarding family.
pub fn guarding_product_family(t: u64, r: u64, a: u64) -> u128 {
    mul(&[2, binom(r + t, t), a as u128])
}

/// `ℓ^{t+1}` with `ℓ = r / (2(t+1))`: profiles guaranteed by the treewidth
/// lower-bound family.
pub fn construction_bounded_treewidth(t: u64, r: u64) -> u128 {
    pow((r / (2 * (t + 1))) as u128, t + 1)
}

/// `2^{√(r+1)}` traces guaranteed by the 1-planar family.
pub fn construction_1_planar(r: u64) -> Option<u128> {
    let ell = ((r + 1) as f64).sqrt().round() as u64;
    (ell * ell == r + 1).then(|| pow(2, ell))
}

/// Vertex count bound `(t+1)(d+2)^t C(d+t, t) k` for a connected graph of
/// treewidth `t`, diameter `d` and metric dimension `k`: a resolving set
/// `S` gives `n` distinct profiles at distance `d`.
pub fn metric_dimension_treewidth(t: u64, d: u64, k: u64) -> u128 {
    nc_bounded_treewidth(t, d, k)
}

/// The heuristic planar ratio `|Π| / (r^4 |A|)`, defined for `r, |A| ≥ 1`.
pub fn planar_ratio(profiles: u64, r: u64, a: u64) -> Option<f64> {
    (r >= 1 && a >= 1).then(|| profiles as f64 / ((r as f64).powi(4) * a as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(10, 0), 1);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom(60, 30), 118_264_581_564_861_424);
        // Pascal's rule as an independent check.
        for n in 1..40u64 {
            for k in 1..n {
                assert_eq!(binom(n, k), binom(n - 1, k - 1) + binom(n - 1, k));
            }
        }
    }

    #[test]
    fn closed_forms() {
        // t = 1, r = 2, |A| = 3: 2 · 4 · 3 · 3.
        assert_eq!(nc_bounded_treewidth(1, 2, 3), 72);
        assert_eq!(nc_planar_degree_6(1, 1), 6_400_000_000);
        assert_eq!(nc_kt_minor_free(4, 0, 1), Some(16u128.pow(4)));
        assert_eq!(nc_kt_minor_free(3, 1, 1), None);
        assert_eq!(profiles_polynomial_in_a(5, 1, 2), Some(256));
        assert_eq!(traces_polynomial_in_a(5, 1), None);
        assert_eq!(profiles_outer_face(2, 2), 216);
        assert_eq!(construction_bounded_treewidth(2, 12), 8);
        assert_eq!(construction_1_planar(8), Some(8));
        assert_eq!(construction_1_planar(7), None);
        assert_eq!(nc_planar_degree_16(u64::MAX, 2), u128::MAX);
    }
}
