//! The standard module library: the two-dimensional ordinary block and the
//! local-local blocks G_c, together with the generator/relation
//! combinatorics that count their indecomposable summands.
//!
//! G_c is the unique self-dual module of dimension 2c whose type is
//! nu_i = floor(i/2). It is built on a chain basis Z_1..Z_{2c} chosen so
//! that the spans N_i = <Z_1..Z_i> form the canonical filtration:
//!
//! ```text
//! V(Z_{2m}) = Z_m   (1 <= m <= c)     F(Z_i)     = 0         (i <= c)
//! V(Z_odd)  = 0                       F(Z_{c+i}) = Z_{2i-1}  (1 <= i <= c)
//! ```
//!
//! V halves indices and F folds the top half onto the odd positions, so
//! V(N_i) = N_{floor(i/2)} and the type is immediate from the basis. The
//! presentation generators are X_j := Z_{2j} for j in the upper index
//! range; everything else is reached by applying F and V.
//!
//! All structure constants are 0/1, so the same matrices define G_c over
//! every coefficient field.

use serde::Serialize;

use crate::field::{FieldCtx, Gf};
use crate::matrix::Mat;
use crate::semilin::{EOType, SemilinearModule};

/// The ordinary block Z/2 + mu_2 on basis (u, w): V fixes u and kills w,
/// F fixes w and kills u.
pub fn ordinary(ctx: &FieldCtx) -> SemilinearModule {
    let mut f = Mat::zero(2, 2);
    let mut v = Mat::zero(2, 2);
    f.set(1, 1, Gf::ONE);
    v.set(0, 0, Gf::ONE);
    SemilinearModule::new(*ctx, f, v).expect("2x2 matrices are square")
}

/// The 2c-dimensional local-local block G_c (c >= 1) on the chain basis
/// Z_1..Z_{2c} (basis slot i-1 holds Z_i). The presentation generator X_j
/// (j in the upper index range) sits at slot 2j - 1, i.e. X_j = Z_{2j}.
pub fn gc(ctx: &FieldCtx, c: usize) -> SemilinearModule {
    assert!(c >= 1, "G_c requires c >= 1");
    let dim = 2 * c;
    let mut f = Mat::zero(dim, dim);
    let mut v = Mat::zero(dim, dim);
    for m in 1..=c {
        // V(Z_{2m}) = Z_m; V kills the odd positions.
        v.set(m - 1, 2 * m - 1, Gf::ONE);
        // F(Z_{c+m}) = Z_{2m-1}; F kills the bottom half.
        f.set(2 * m - 2, c + m - 1, Gf::ONE);
    }
    SemilinearModule::new(*ctx, f, v).expect("2c x 2c matrices are square")
}

/// One defining relation of G_c: F^f_power X_{f_index} + V^v_power
/// X_{v_index} = 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GcRelation {
    pub f_power: usize,
    pub f_index: usize,
    pub v_power: usize,
    pub v_index: usize,
}

impl GcRelation {
    /// Render like `F²X₂+V³X₅`; exponent 1 is omitted.
    pub fn render(&self) -> String {
        format!(
            "F{}X{}+V{}X{}",
            power_superscript(self.f_power),
            subscript(self.f_index),
            power_superscript(self.v_power),
            subscript(self.v_index)
        )
    }
}

fn power_superscript(p: usize) -> String {
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    if p == 1 {
        return String::new();
    }
    p.to_string()
        .bytes()
        .map(|b| SUP[(b - b'0') as usize])
        .collect()
}

fn subscript(i: usize) -> String {
    const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    i.to_string()
        .bytes()
        .map(|b| SUB[(b - b'0') as usize])
        .collect()
}

/// The upper index range I = {ceil((c+1)/2), .., c}: the generators X_j
/// with j in I present G_c, one relation each.
pub fn upper_range(c: usize) -> std::ops::RangeInclusive<usize> {
    (c + 1).div_ceil(2)..=c
}

/// The defining relations of G_c, one per generator index in the upper
/// range, ascending. The pairing permutation iota sends j to the generator
/// whose V-power term closes the relation of X_j; its cycles are the
/// indecomposable summands.
pub fn gc_relations(c: usize) -> Vec<GcRelation> {
    assert!(c >= 1, "G_c requires c >= 1");
    let lo = *upper_range(c).start();
    let idx = |j: usize| j - lo;
    let len = c - lo + 1;

    // t(j): the unique dyadic multiple of m(j) = 2c-2j+1 inside the range;
    // eps(j) its exponent.
    let mut t = vec![0usize; len];
    let mut eps = vec![0usize; len];
    for j in upper_range(c) {
        let mut m = 2 * c - 2 * j + 1;
        let mut e = 0;
        while m < lo {
            m *= 2;
            e += 1;
        }
        debug_assert!(m <= c, "dyadic representative escaped the range");
        t[idx(j)] = m;
        eps[idx(j)] = e;
    }
    let mut t_inv = vec![0usize; c + 1];
    for j in upper_range(c) {
        t_inv[t[idx(j)]] = j;
    }

    upper_range(c)
        .map(|j| {
            let odd = j >> j.trailing_zeros();
            let s = c - (odd - 1) / 2;
            let iota = t_inv[s];
            GcRelation {
                f_power: j.trailing_zeros() as usize + 1,
                f_index: j,
                v_power: eps[idx(iota)] + 1,
                v_index: iota,
            }
        })
        .collect()
}

/// Number of indecomposable summands of G_c: the cycle count of the pairing
/// permutation.
pub fn gc_summands(c: usize) -> usize {
    let rels = gc_relations(c);
    let lo = *upper_range(c).start();
    let iota: Vec<usize> = rels.iter().map(|r| r.v_index - lo).collect();
    let mut seen = vec![false; iota.len()];
    let mut cycles = 0;
    for start in 0..iota.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = iota[j];
        }
    }
    cycles
}

/// Closed form for the type of G_c: nu_i = floor(i/2).
pub fn gc_eo_closed(c: usize) -> EOType {
    EOType::new((1..=c).map(|i| i / 2).collect())
}

/// Closed form for the a-number of G_c: ceil(c/2), the size of the upper
/// index range.
pub fn gc_a_number(c: usize) -> usize {
    c.div_ceil(2)
}
