//! Builds the 2g-dimensional F/V-module of a curve y^2 - y = f(x) directly
//! from its branch data.
//!
//! Per branch point alpha with invariant c = c_alpha >= 1 the module gets a
//! nilpotent block on labels lambda_{alpha,1..c}, sigma_{alpha,1..c}; every
//! branch except the designated base branch additionally contributes a
//! two-dimensional split block on labels (lambda_ss, sigma_ss). The action:
//!
//! ```text
//! F lambda_j = 0
//! V lambda_j = lambda_{j/2}                      (j even; 0 for j odd)
//! F sigma_j  = sigma_{2j}                        (2j <= c)
//!            = r_form(b, 2j) in lambda coords    (2j >  c)
//! V sigma_j  = cr_form(b, j) in lambda coords    (j odd; 0 for j even)
//! ```
//!
//! and on each split block `F lambda_ss = 0, V lambda_ss = lambda_ss,
//! F sigma_ss = sigma_ss, V sigma_ss = 0`. The lambda-span is ker F = im V;
//! the block for each label group is F/V-invariant, so the matrices are
//! block-diagonal in label order.

use serde::Serialize;

use crate::curve::{BranchDatum, CurveData};
use crate::field::{FieldCtx, Gf};
use crate::matrix::Mat;
use crate::semilin::SemilinearModule;

/// Which of the four label families a basis slot belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelKind {
    LambdaNil,
    SigmaNil,
    LambdaSs,
    SigmaSs,
}

/// Name of one basis slot: the family, the branch point it belongs to, and
/// the in-block position (1..=c for the nilpotent labels, 0 for the split
/// pairs).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeRhamLabel {
    pub kind: LabelKind,
    pub alpha: Gf,
    pub j: usize,
}

/// The assembled module together with the label of every basis slot.
#[derive(Clone, Debug)]
pub struct DeRhamModule {
    pub module: SemilinearModule,
    pub labels: Vec<DeRhamLabel>,
}

/// Coefficients, by lambda-index, of the reduction of the j-th negative
/// power of (x - alpha): index 2i - j + 1 carries the branch coefficient
/// a_i for each i >= j/2 up to c. Zero coefficients are skipped.
pub fn r_form(b: &BranchDatum, j: usize) -> Vec<(usize, Gf)> {
    let mut out = Vec::new();
    for i in j.div_ceil(2)..=b.c() {
        let a = b.coeffs[i];
        if !a.is_zero() {
            out.push((2 * i + 1 - j, a));
        }
    }
    out
}

/// Cartier image of the same class, nonzero only for odd j: index
/// i - (j-1)/2 carries sqrt(a_i) for each i >= (j+1)/2 up to c.
pub fn cr_form(k: &FieldCtx, b: &BranchDatum, j: usize) -> Vec<(usize, Gf)> {
    let mut out = Vec::new();
    if j.is_multiple_of(2) {
        return out;
    }
    for i in j.div_ceil(2)..=b.c() {
        let a = b.coeffs[i];
        if !a.is_zero() {
            out.push((i - (j - 1) / 2, k.sqrt(a)));
        }
    }
    out
}

/// Builds the module of a curve; the base branch (the one that contributes
/// no split pair) is the first in canonical order.
pub fn build_drham(cd: &CurveData) -> DeRhamModule {
    build_with_base(cd, 0)
}

/// Same construction with an explicit base-branch index; the output type is
/// provably independent of the choice, which a test exercises.
pub(crate) fn build_with_base(cd: &CurveData, base: usize) -> DeRhamModule {
    let k = *cd.ctx();
    let branches = cd.branches();
    assert!(base < branches.len(), "base branch out of range");

    let mut labels = Vec::new();
    let mut nil_offset = Vec::with_capacity(branches.len());
    for br in branches {
        nil_offset.push(labels.len());
        for j in 1..=br.c() {
            labels.push(DeRhamLabel { kind: LabelKind::LambdaNil, alpha: br.alpha, j });
        }
        for j in 1..=br.c() {
            labels.push(DeRhamLabel { kind: LabelKind::SigmaNil, alpha: br.alpha, j });
        }
    }
    let mut ss_offset = vec![usize::MAX; branches.len()];
    for (bi, br) in branches.iter().enumerate() {
        if bi == base {
            continue;
        }
        ss_offset[bi] = labels.len();
        labels.push(DeRhamLabel { kind: LabelKind::LambdaSs, alpha: br.alpha, j: 0 });
        labels.push(DeRhamLabel { kind: LabelKind::SigmaSs, alpha: br.alpha, j: 0 });
    }

    let dim = labels.len();
    let mut f = Mat::zero(dim, dim);
    let mut v = Mat::zero(dim, dim);
    for (bi, br) in branches.iter().enumerate() {
        let c = br.c();
        let lam = |j: usize| nil_offset[bi] + j - 1;
        let sig = |j: usize| nil_offset[bi] + c + j - 1;
        for j in 1..=c {
            if j % 2 == 0 {
                v.set(lam(j / 2), lam(j), Gf::ONE);
            }
            if 2 * j <= c {
                f.set(sig(2 * j), sig(j), Gf::ONE);
            } else {
                for (idx, a) in r_form(br, 2 * j) {
                    f.set(lam(idx), sig(j), a);
                }
            }
            for (idx, a) in cr_form(&k, br, j) {
                v.set(lam(idx), sig(j), a);
            }
        }
        if bi != base {
            let base_slot = ss_offset[bi];
            v.set(base_slot, base_slot, Gf::ONE);
            f.set(base_slot + 1, base_slot + 1, Gf::ONE);
        }
    }

    let module = SemilinearModule::new(k, f, v).expect("square by construction");
    debug_assert_eq!(dim, 2 * cd.invariants().genus);
    DeRhamModule { module, labels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::random_curve;
    use crate::semilin::Subspace;

    fn k(n: u32) -> FieldCtx {
        FieldCtx::new(n).unwrap()
    }

    fn curve(k: &FieldCtx, branches: &[(u32, &[u32])]) -> CurveData {
        let data = branches
            .iter()
            .map(|(a, cs)| BranchDatum {
                alpha: k.element(*a).unwrap(),
                coeffs: cs.iter().map(|c| k.element(*c).unwrap()).collect(),
            })
            .collect();
        CurveData::new(*k, data).unwrap()
    }

    #[test]
    fn single_pole_of_order_three_gives_the_smallest_local_block() {
        let k = k(2);
        let cd = curve(&k, &[(0, &[0, 1])]);
        let dr = build_drham(&cd);
        assert_eq!(dr.labels.len(), 2);
        // F sigma_1 = lambda_1 and V sigma_1 = lambda_1.
        let sigma = vec![Gf::ZERO, Gf::ONE];
        let lambda = vec![Gf::ONE, Gf::ZERO];
        assert_eq!(dr.module.apply_f(&sigma), lambda);
        assert_eq!(dr.module.apply_v(&sigma), lambda);
        assert_eq!(dr.module.apply_f(&lambda), vec![Gf::ZERO; 2]);
        assert_eq!(dr.module.apply_v(&lambda), vec![Gf::ZERO; 2]);
        assert_eq!(dr.module.eo_type().unwrap().as_slice(), &[0]);
    }

    #[test]
    fn two_simple_poles_give_one_split_block() {
        let k = k(2);
        let cd = curve(&k, &[(0, &[1]), (1, &[1])]);
        let dr = build_drham(&cd);
        assert_eq!(dr.labels.len(), 2);
        assert_eq!(dr.module.eo_type().unwrap().as_slice(), &[1]);
        assert_eq!(dr.module.p_rank().unwrap(), 1);
        assert_eq!(dr.module.a_number().unwrap(), 0);
    }

    #[test]
    fn order_five_pole_has_the_same_type_for_every_coefficient_choice() {
        let k2 = k(1);
        for a0 in 0..2 {
            for a1 in 0..2 {
                let cd = curve(&k2, &[(0, &[a0, a1, 1])]);
                let dr = build_drham(&cd);
                assert_eq!(
                    dr.module.eo_type().unwrap().as_slice(),
                    &[0, 1],
                    "a=[{a0},{a1},1]"
                );
            }
        }
        // Over GF(4) too, including non-prime-field coefficients.
        let k4 = k(2);
        for top in 1..4 {
            let cd = curve(&k4, &[(1, &[3, 2, top])]);
            assert_eq!(
                build_drham(&cd).module.eo_type().unwrap().as_slice(),
                &[0, 1],
                "top={top}"
            );
        }
    }

    #[test]
    fn random_curves_yield_valid_modules_with_matching_invariants() {
        for (seed, n, ds) in [
            (1u64, 1u32, &[3usize, 1][..]),
            (2, 2, &[5, 3]),
            (3, 3, &[7]),
            (4, 4, &[3, 3, 1, 1]),
            (5, 2, &[9, 1]),
            (6, 3, &[5, 1, 1, 1]),
        ] {
            let k = k(n);
            let cd = random_curve(&k, ds, seed).unwrap();
            let inv = cd.invariants();
            let dr = build_drham(&cd);
            let report = dr.module.check_bt1();
            assert!(report.is_valid(), "seed={seed}: {:?}", report.failures);
            assert_eq!(dr.module.dim(), 2 * inv.genus);
            assert_eq!(dr.module.p_rank().unwrap(), inv.two_rank, "seed={seed}");
            assert_eq!(dr.module.a_number().unwrap(), inv.a_number, "seed={seed}");
        }
    }

    #[test]
    fn lambda_span_is_kernel_of_f_and_image_of_v() {
        let k = k(2);
        let cd = random_curve(&k, &[5, 3, 1], 7).unwrap();
        let dr = build_drham(&cd);
        let g = dr.module.dim() / 2;
        let rows: Vec<Vec<Gf>> = dr
            .labels
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l.kind, LabelKind::LambdaNil | LabelKind::LambdaSs))
            .map(|(i, _)| {
                let mut e = vec![Gf::ZERO; dr.module.dim()];
                e[i] = Gf::ONE;
                e
            })
            .collect();
        assert_eq!(rows.len(), g);
        let lam_span = Subspace::from_rows(rows, dr.module.dim(), &k);
        let ker_f = dr.module.ker_f();
        let im_v = dr.module.im_v();
        assert_eq!(ker_f.dim(), g);
        assert!(lam_span.contains(&ker_f, &k) && ker_f.contains(&lam_span, &k));
        assert!(lam_span.contains(&im_v, &k) && im_v.contains(&lam_span, &k));
    }

    #[test]
    fn matrices_are_block_diagonal_over_label_groups() {
        let k = k(3);
        let cd = random_curve(&k, &[5, 3, 3], 11).unwrap();
        let dr = build_drham(&cd);
        let dim = dr.module.dim();
        // Group id: nilpotent blocks keyed by branch, split pairs likewise.
        let group: Vec<(u8, Gf)> = dr
            .labels
            .iter()
            .map(|l| match l.kind {
                LabelKind::LambdaNil | LabelKind::SigmaNil => (0, l.alpha),
                LabelKind::LambdaSs | LabelKind::SigmaSs => (1, l.alpha),
            })
            .collect();
        for row in 0..dim {
            for col in 0..dim {
                if group[row] != group[col] {
                    assert!(dr.module.f_mat().get(row, col).is_zero(), "F[{row},{col}]");
                    assert!(dr.module.v_mat().get(row, col).is_zero(), "V[{row},{col}]");
                }
            }
        }
    }

    #[test]
    fn type_is_independent_of_the_base_branch() {
        let k = k(2);
        let cd = random_curve(&k, &[3, 3, 1], 13).unwrap();
        let reference = build_with_base(&cd, 0).module.eo_type().unwrap();
        for base in 1..cd.branches().len() {
            let eo = build_with_base(&cd, base).module.eo_type().unwrap();
            assert_eq!(eo, reference, "base={base}");
        }
    }

    #[test]
    fn type_depends_only_on_the_pole_orders() {
        for n in [2u32, 3] {
            let k = k(n);
            let mut seen = None;
            for seed in 0..5u64 {
                let cd = random_curve(&k, &[3, 3], seed).unwrap();
                let eo = build_drham(&cd).module.eo_type().unwrap();
                match &seen {
                    None => seen = Some(eo),
                    Some(prev) => assert_eq!(&eo, prev, "n={n} seed={seed}"),
                }
            }
        }
    }

    /// Canonical flag of a one-branch curve: lambda_1..lambda_c, then sigma
    /// in descending index order. V halves and F-preimage shifts by c.
    #[test]
    fn one_branch_flag_in_descending_sigma_order_is_canonical() {
        for (n, c, seed) in [(1u32, 1usize, 1u64), (2, 2, 2), (2, 3, 3), (3, 4, 4), (2, 5, 5)] {
            let k = k(n);
            let cd = random_curve(&k, &[2 * c + 1], seed).unwrap();
            let dr = build_drham(&cd);
            let dim = 2 * c;
            // Basis order in the flag: slot order for lambda, then sigma_c
            // down to sigma_1 (slots 2c-1, 2c-2, .., c).
            let flag_slot = |i: usize| if i <= c { i - 1 } else { c + (2 * c - i) };
            let n_i = |i: usize| {
                let rows: Vec<Vec<Gf>> = (1..=i)
                    .map(|t| {
                        let mut e = vec![Gf::ZERO; dim];
                        e[flag_slot(t)] = Gf::ONE;
                        e
                    })
                    .collect();
                Subspace::from_rows(rows, dim, &k)
            };
            for i in 0..=dim {
                let ni = n_i(i);
                let vi = dr.module.image_v(&ni);
                let expect_v = n_i(i / 2);
                assert!(
                    vi.contains(&expect_v, &k) && expect_v.contains(&vi, &k),
                    "c={c} i={i}: V(N_i) != N_(i/2)"
                );
                let fpre = dr.module.preimage_f(&ni);
                let expect_f = n_i(c + i.div_ceil(2));
                assert!(
                    fpre.contains(&expect_f, &k) && expect_f.contains(&fpre, &k),
                    "c={c} i={i}: F^-1(N_i) != N_(c+ceil(i/2))"
                );
            }
        }
    }

    #[test]
    fn reduction_forms_on_small_branches() {
        let k = k(2);
        let b = BranchDatum {
            alpha: Gf::ZERO,
            coeffs: vec![Gf::ZERO, Gf::ONE],
        };
        assert_eq!(r_form(&b, 2), vec![(1, Gf::ONE)]);
        assert_eq!(r_form(&b, 3), vec![]);
        assert_eq!(r_form(&b, 0), vec![(3, Gf::ONE)]);
        assert_eq!(cr_form(&k, &b, 1), vec![(1, Gf::ONE)]);
        assert_eq!(cr_form(&k, &b, 2), vec![]);
        assert_eq!(cr_form(&k, &b, 3), vec![]);

        // Square roots really are taken: over GF(4), sqrt(t) = t + 1 when
        // t^2 + t + 1 = 0.
        let k4 = FieldCtx::new(2).unwrap();
        let t = k4.element(2).unwrap();
        let b4 = BranchDatum {
            alpha: Gf::ZERO,
            coeffs: vec![Gf::ZERO, t],
        };
        let got = cr_form(&k4, &b4, 1);
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].0, 1);
        assert_eq!(k4.sqr(got[0].1), t);
    }

    #[test]
    fn genus_zero_curve_yields_the_zero_module() {
        let k = k(2);
        let cd = curve(&k, &[(0, &[1])]);
        let dr = build_drham(&cd);
        assert_eq!(dr.module.dim(), 0);
        assert_eq!(dr.module.eo_type().unwrap().as_slice(), &[] as &[usize]);
        assert_eq!(dr.module.p_rank().unwrap(), 0);
    }
}
