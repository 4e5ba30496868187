//! Frobenius-semilinear module engine over GF(2^n).
//!
//! A [`SemilinearModule`] is a pair of square matrices (F, V) acting on
//! column vectors by F(v) = F.v^(2) and V(v) = V.v^(1/2) (entrywise
//! powers), so F is 2-semilinear and V is 1/2-semilinear. [`check_bt1`]
//! tests the axioms that make such a pair the Dieudonne module of a
//! 2-torsion group scheme: FV = VF = 0, rank F + rank V = dim,
//! ker F = im V, and ker V = im F. [`eo_type`] computes the Ekedahl-Oort
//! type by closing {0, everything} under V and F^-1 into the canonical
//! filtration and interpolating across its gaps, where V is zero or
//! bijective on each graded piece.
//!
//! [`check_bt1`]: SemilinearModule::check_bt1
//! [`eo_type`]: SemilinearModule::eo_type

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldCtx, FieldError, Gf};
use crate::matrix::Mat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("matrices must be square and of equal size (F is {f_rows}x{f_cols}, V is {v_rows}x{v_cols})")]
    ShapeMismatch {
        f_rows: usize,
        f_cols: usize,
        v_rows: usize,
        v_cols: usize,
    },
    #[error("modules live over different field contexts")]
    CtxMismatch,
    #[error("subspace of ambient dimension {got} fed to a module of dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("canonical closure is not totally ordered: {detail}")]
    NotAChain { detail: String },
    #[error("V is neither zero nor bijective between canonical neighbours of dims {lower_dim} and {upper_dim} (image dims {v_lower} -> {v_upper})")]
    MixedStep {
        lower_dim: usize,
        upper_dim: usize,
        v_lower: usize,
        v_upper: usize,
    },
    #[error("module dimension {dim} is odd; types are defined for even-dimensional (self-dual) modules")]
    OddDimension { dim: usize },
}

/// Subspace of k^ambient, held as the canonical reduced-row-echelon basis,
/// so equality of subspaces is equality of representations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    mat: Mat,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            mat: Mat::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            mat: Mat::identity(ambient),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Gf>>, ambient: usize, k: &FieldCtx) -> Self {
        Subspace::from_mat(Mat::from_rows(rows, ambient), k)
    }

    pub fn from_mat(m: Mat, k: &FieldCtx) -> Self {
        Subspace {
            ambient: m.cols(),
            mat: m.rref(k).0,
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &Mat {
        &self.mat
    }

    pub fn contains_vec(&self, v: &[Gf], k: &FieldCtx) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut v = v.to_vec();
        for i in 0..self.mat.rows() {
            let pivot = self.mat.row(i).iter().position(|c| !c.is_zero()).unwrap();
            let c = v[pivot];
            if !c.is_zero() {
                for (j, vj) in v.iter_mut().enumerate() {
                    *vj = k.sub(*vj, k.mul(c, self.mat.get(i, j)));
                }
            }
        }
        v.iter().all(|c| c.is_zero())
    }

    /// Whether `other` is contained in `self`.
    pub fn contains(&self, other: &Subspace, k: &FieldCtx) -> bool {
        other.dim() <= self.dim()
            && (0..other.mat.rows()).all(|i| self.contains_vec(other.mat.row(i), k))
    }

    pub fn sum(&self, other: &Subspace, k: &FieldCtx) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::from_mat(self.mat.vstack(&other.mat), k)
    }

    /// Rows spanning {q : q.b = 0 for all b in the subspace}; the subspace
    /// is exactly the solution set of these linear constraints.
    pub fn annihilator(&self, k: &FieldCtx) -> Mat {
        self.mat.kernel(k)
    }
}

/// Which semilinear operation to apply to a subspace.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SlMapKind {
    F,
    V,
    FInv,
    VInv,
}

/// Module (k^dim, F, V) with F(v) = F.v^(2) and V(v) = V.v^(1/2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemilinearModule {
    ctx: FieldCtx,
    dim: usize,
    f_mat: Mat,
    v_mat: Mat,
}

/// Outcome of the group-scheme axioms, one flag per axiom, with a
/// human-readable witness for every failure.
#[derive(Clone, Debug, Serialize)]
pub struct Bt1Report {
    pub dim: usize,
    pub fv_is_zero: bool,
    pub vf_is_zero: bool,
    pub rank_f: usize,
    pub rank_v: usize,
    pub rank_sum_ok: bool,
    pub ker_f_eq_im_v: bool,
    pub ker_v_eq_im_f: bool,
    pub failures: Vec<String>,
}

impl Bt1Report {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl SemilinearModule {
    pub fn new(ctx: FieldCtx, f_mat: Mat, v_mat: Mat) -> Result<Self, SlError> {
        let dim = f_mat.rows();
        if f_mat.cols() != dim || v_mat.rows() != dim || v_mat.cols() != dim {
            return Err(SlError::ShapeMismatch {
                f_rows: f_mat.rows(),
                f_cols: f_mat.cols(),
                v_rows: v_mat.rows(),
                v_cols: v_mat.cols(),
            });
        }
        Ok(SemilinearModule {
            ctx,
            dim,
            f_mat,
            v_mat,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f_mat(&self) -> &Mat {
        &self.f_mat
    }

    pub fn v_mat(&self) -> &Mat {
        &self.v_mat
    }

    pub fn apply_f(&self, v: &[Gf]) -> Vec<Gf> {
        let sq: Vec<Gf> = v.iter().map(|&a| self.ctx.frob(a)).collect();
        self.f_mat.mul_vec(&sq, &self.ctx)
    }

    pub fn apply_v(&self, v: &[Gf]) -> Vec<Gf> {
        let rt: Vec<Gf> = v.iter().map(|&a| self.ctx.sqrt(a)).collect();
        self.v_mat.mul_vec(&rt, &self.ctx)
    }

    fn check_ambient(&self, s: &Subspace) -> Result<(), SlError> {
        if s.ambient() != self.dim {
            return Err(SlError::DimensionMismatch {
                expected: self.dim,
                got: s.ambient(),
            });
        }
        Ok(())
    }

    pub fn image_f(&self, s: &Subspace) -> Subspace {
        let rows = (0..s.basis().rows())
            .map(|i| self.apply_f(s.basis().row(i)))
            .collect();
        Subspace::from_rows(rows, self.dim, &self.ctx)
    }

    pub fn image_v(&self, s: &Subspace) -> Subspace {
        let rows = (0..s.basis().rows())
            .map(|i| self.apply_v(s.basis().row(i)))
            .collect();
        Subspace::from_rows(rows, self.dim, &self.ctx)
    }

    /// {v : F(v) in S}. Solving F.v^(2) in S is linear in w = v^(2); the
    /// answer is the entrywise square root of that solution space (legal
    /// because Frobenius is a field automorphism).
    pub fn preimage_f(&self, s: &Subspace) -> Subspace {
        let q = s.annihilator(&self.ctx);
        let w = q.mul(&self.f_mat, &self.ctx).kernel(&self.ctx);
        Subspace::from_mat(w.map(|a| self.ctx.sqrt(a)), &self.ctx)
    }

    /// {v : V(v) in S}, by the same device with the inverse twist.
    pub fn preimage_v(&self, s: &Subspace) -> Subspace {
        let q = s.annihilator(&self.ctx);
        let w = q.mul(&self.v_mat, &self.ctx).kernel(&self.ctx);
        Subspace::from_mat(w.map(|a| self.ctx.frob(a)), &self.ctx)
    }

    pub fn sl_map(&self, s: &Subspace, which: SlMapKind) -> Result<Subspace, SlError> {
        self.check_ambient(s)?;
        Ok(match which {
            SlMapKind::F => self.image_f(s),
            SlMapKind::V => self.image_v(s),
            SlMapKind::FInv => self.preimage_f(s),
            SlMapKind::VInv => self.preimage_v(s),
        })
    }

    /// ker F as a subspace; the kernel condition on v^(2) pulls back
    /// through the inverse Frobenius.
    pub fn ker_f(&self) -> Subspace {
        let w = self.f_mat.kernel(&self.ctx);
        Subspace::from_mat(w.map(|a| self.ctx.sqrt(a)), &self.ctx)
    }

    pub fn ker_v(&self) -> Subspace {
        let w = self.v_mat.kernel(&self.ctx);
        Subspace::from_mat(w.map(|a| self.ctx.frob(a)), &self.ctx)
    }

    /// im F = column space of the F matrix (v^(2) sweeps all of k^dim).
    pub fn im_f(&self) -> Subspace {
        self.image_f(&Subspace::full(self.dim))
    }

    pub fn im_v(&self) -> Subspace {
        self.image_v(&Subspace::full(self.dim))
    }

    /// Test the group-scheme axioms, recording a witness per failed axiom.
    pub fn check_bt1(&self) -> Bt1Report {
        let k = &self.ctx;
        let mut failures = Vec::new();

        // F(V(v)) = Fm . (Vm)^(2) . v and V(F(v)) = Vm . (Fm)^(1/2) . v are
        // plain linear maps; composing the semilinear twists cancels them.
        let fv = self.f_mat.mul(&self.v_mat.map(|a| k.frob(a)), k);
        let vf = self.v_mat.mul(&self.f_mat.map(|a| k.sqrt(a)), k);
        let first_nonzero_col = |m: &Mat| {
            (0..m.cols()).find(|&j| (0..m.rows()).any(|i| !m.get(i, j).is_zero()))
        };
        let fv_is_zero = match first_nonzero_col(&fv) {
            None => true,
            Some(j) => {
                failures.push(format!("F(V(e_{j})) != 0"));
                false
            }
        };
        let vf_is_zero = match first_nonzero_col(&vf) {
            None => true,
            Some(j) => {
                failures.push(format!("V(F(e_{j})) != 0"));
                false
            }
        };

        let rank_f = self.f_mat.rank(k);
        let rank_v = self.v_mat.rank(k);
        let rank_sum_ok = rank_f + rank_v == self.dim;
        if !rank_sum_ok {
            failures.push(format!(
                "rank F + rank V = {rank_f} + {rank_v} != dim = {}",
                self.dim
            ));
        }

        let ker_f_eq_im_v = self.ker_f() == self.im_v();
        if !ker_f_eq_im_v {
            failures.push(format!(
                "ker F (dim {}) != im V (dim {})",
                self.ker_f().dim(),
                self.im_v().dim()
            ));
        }
        let ker_v_eq_im_f = self.ker_v() == self.im_f();
        if !ker_v_eq_im_f {
            failures.push(format!(
                "ker V (dim {}) != im F (dim {})",
                self.ker_v().dim(),
                self.im_f().dim()
            ));
        }

        Bt1Report {
            dim: self.dim,
            fv_is_zero,
            vf_is_zero,
            rank_f,
            rank_v,
            rank_sum_ok,
            ker_f_eq_im_v,
            ker_v_eq_im_f,
            failures,
        }
    }

    /// Close {0, everything} under S -> V(S) and S -> F^-1(S), deduplicate,
    /// and return the members sorted by dimension. For a valid module this
    /// is the canonical filtration; inputs whose closure is not totally
    /// ordered (or has more members than a chain allows) get `NotAChain`.
    pub fn canonical_filtration(&self) -> Result<Vec<Subspace>, SlError> {
        let max_members = self.dim + 1;
        let mut members = vec![Subspace::zero(self.dim)];
        let full = Subspace::full(self.dim);
        if !members.contains(&full) {
            members.push(full);
        }
        loop {
            let snapshot = members.len();
            for i in 0..snapshot {
                let s = members[i].clone();
                for t in [self.image_v(&s), self.preimage_f(&s)] {
                    if !members.contains(&t) {
                        if members.len() == max_members {
                            return Err(SlError::NotAChain {
                                detail: format!(
                                    "closure exceeds {max_members} subspaces in dimension {}",
                                    self.dim
                                ),
                            });
                        }
                        members.push(t);
                    }
                }
            }
            if members.len() == snapshot {
                break;
            }
        }
        members.sort_by_key(|s| s.dim());
        for w in members.windows(2) {
            if w[0].dim() == w[1].dim() || !w[1].contains(&w[0], &self.ctx) {
                return Err(SlError::NotAChain {
                    detail: format!(
                        "members of dims {} and {} are not nested",
                        w[0].dim(),
                        w[1].dim()
                    ),
                });
            }
        }
        Ok(members)
    }

    /// Ekedahl-Oort type [nu_1, ..., nu_g], g = dim/2, where nu_i is the
    /// dimension of V applied to the i-dimensional member of any final
    /// filtration. Between canonical neighbours V is zero or bijective on
    /// the graded piece, so nu interpolates with slope 0 or 1; a slope
    /// strictly in between is a `MixedStep` (the input was not a valid
    /// module).
    pub fn eo_type(&self) -> Result<EOType, SlError> {
        if !self.dim.is_multiple_of(2) {
            return Err(SlError::OddDimension { dim: self.dim });
        }
        let g = self.dim / 2;
        let chain = self.canonical_filtration()?;
        let marks: Vec<(usize, usize)> = chain
            .iter()
            .map(|s| (s.dim(), self.image_v(s).dim()))
            .collect();
        let mut nu = vec![0usize; g + 1];
        for w in marks.windows(2) {
            let (d0, v0) = w[0];
            let (d1, v1) = w[1];
            let step = v1 - v0;
            let hi = d1.min(g);
            if step == 0 {
                for slot in nu.iter_mut().take(hi + 1).skip(d0 + 1) {
                    *slot = v0;
                }
            } else if step == d1 - d0 {
                for (i, slot) in nu.iter_mut().enumerate().take(hi + 1).skip(d0 + 1) {
                    *slot = v0 + (i - d0);
                }
            } else {
                return Err(SlError::MixedStep {
                    lower_dim: d0,
                    upper_dim: d1,
                    v_lower: v0,
                    v_upper: v1,
                });
            }
        }
        Ok(EOType::new(nu[1..].to_vec()))
    }

    /// Largest i with nu_i = i (the multiplicative rank).
    pub fn p_rank(&self) -> Result<usize, SlError> {
        Ok(self.eo_type()?.p_rank())
    }

    /// g - nu_g.
    pub fn a_number(&self) -> Result<usize, SlError> {
        Ok(self.eo_type()?.a_number())
    }

    /// Independent a-number: g - dim V(V(everything)). Used to cross-check
    /// the filtration route.
    pub fn a_number_direct(&self) -> Result<usize, SlError> {
        if !self.dim.is_multiple_of(2) {
            return Err(SlError::OddDimension { dim: self.dim });
        }
        let v2 = self.image_v(&self.im_v());
        Ok(self.dim / 2 - v2.dim())
    }

    /// Block-diagonal direct sum. All parts must share the field context.
    pub fn direct_sum(parts: &[&SemilinearModule]) -> Result<SemilinearModule, SlError> {
        let Some(first) = parts.first() else {
            panic!("direct_sum of zero modules needs a field context");
        };
        let ctx = first.ctx;
        if parts.iter().any(|m| m.ctx != ctx) {
            return Err(SlError::CtxMismatch);
        }
        let dim: usize = parts.iter().map(|m| m.dim).sum();
        let mut f = Mat::zero(dim, dim);
        let mut v = Mat::zero(dim, dim);
        let mut off = 0;
        for m in parts {
            for i in 0..m.dim {
                for j in 0..m.dim {
                    f.set(off + i, off + j, m.f_mat.get(i, j));
                    v.set(off + i, off + j, m.v_mat.get(i, j));
                }
            }
            off += m.dim;
        }
        SemilinearModule::new(ctx, f, v)
    }

    pub fn to_file(&self) -> ModuleFile {
        let to_rows = |m: &Mat| {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|c| c.0 as u32).collect())
                .collect()
        };
        ModuleFile {
            convention: CONVENTION.to_string(),
            n: self.ctx.n(),
            modulus: self.ctx.modulus(),
            dim: self.dim,
            f: to_rows(&self.f_mat),
            v: to_rows(&self.v_mat),
        }
    }

    pub fn from_file(file: &ModuleFile) -> Result<Self, SlError> {
        let ctx = FieldCtx::with_modulus(file.n, file.modulus)?;
        let parse = |rows: &Vec<Vec<u32>>| -> Result<Mat, SlError> {
            let mut out = Vec::with_capacity(rows.len());
            for r in rows {
                let mut row = Vec::with_capacity(r.len());
                for &bits in r {
                    row.push(ctx.element(bits)?);
                }
                out.push(row);
            }
            if out.iter().any(|r| r.len() != file.dim) || out.len() != file.dim {
                return Err(SlError::ShapeMismatch {
                    f_rows: out.len(),
                    f_cols: out.first().map_or(0, |r| r.len()),
                    v_rows: file.dim,
                    v_cols: file.dim,
                });
            }
            Ok(Mat::from_rows(out, file.dim))
        };
        SemilinearModule::new(ctx, parse(&file.f)?, parse(&file.v)?)
    }
}

/// Stated with the serialized form so a dump is self-describing.
pub const CONVENTION: &str =
    "F(v) = F.v^(2), V(v) = V.v^(1/2), entrywise powers; column j is the image of e_j; \
     entries are GF(2^n) bitmasks";

/// Wire form of a module: decimal bitmask integers throughout.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleFile {
    #[serde(default)]
    pub convention: String,
    pub n: u32,
    pub modulus: u32,
    pub dim: usize,
    #[serde(rename = "F")]
    pub f: Vec<Vec<u32>>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<u32>>,
}

/// Ekedahl-Oort type [nu_1..nu_g]: nu is monotone with steps in {0, 1} and
/// nu_1 <= 1.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct EOType(Vec<usize>);

impl EOType {
    pub fn new(nu: Vec<usize>) -> Self {
        debug_assert!(nu.first().is_none_or(|&v| v <= 1));
        debug_assert!(nu.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1));
        EOType(nu)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn g(&self) -> usize {
        self.0.len()
    }

    /// Largest i with nu_i = i; zero when nu_1 = 0 (or g = 0).
    pub fn p_rank(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .take_while(|&(i, &v)| v == i + 1)
            .count()
    }

    pub fn a_number(&self) -> usize {
        match self.0.last() {
            Some(&last) => self.0.len() - last,
            None => 0,
        }
    }
}

impl std::fmt::Display for EOType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
