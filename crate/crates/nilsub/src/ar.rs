//! Auslander–Reiten machinery.
//!
//! Objects of `H_m` are modules over the algebra of the quiver `u -> v` with
//! loops `alpha`, `beta` and relations `alpha^m = 0`, `beta^n = 0`,
//! `beta·iota = iota·alpha`. Its indecomposable projectives are
//! `P_u = (Λ_m = Λ_m)` and `P_v = (0 -> Λ_n)`; the injectives are
//! `I_u = (Λ_m -> 0)` and `I_v = (Λ_m ⊆ Λ_n)` with `Λ_m` mapped onto
//! `soc^m Λ_n`.
//!
//! A morphism between sums of projectives is a matrix of polynomials:
//! `u -> u` and `v -> u` entries have degree `< m`, `v -> v` entries have
//! degree `< n` and `u -> v` entries vanish. The Nakayama functor sends this
//! matrix to the map between the matching injectives given by the same
//! polynomials, and `τ_H X = ker ν(p1)` for a minimal presentation
//! `P1 -> P0 -> X -> 0`. The relative translate is `τ_S = Mimo ∘ τ_H`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::hom::{fingerprint, hom_basis};
use crate::krull::{end_radical, local_iso, DecomposeOptions};
use crate::linalg::{Echelon, Mat};
use crate::rep::{jordan_block, DimPair, ExtensionSpace, Morphism, RepError, RepObject, Shape, StandardKind};
use crate::rng::Rng;

/// Errors of the translate computations.
#[derive(Debug, thiserror::Error)]
pub enum ArError {
    #[error("object has a projective direct summand {0:?}")]
    ProjectiveSummand(StandardKind),
    #[error("object is relatively projective ({0:?})")]
    RelativelyProjective(StandardKind),
    #[error("object is zero")]
    Zero,
    #[error("endomorphism ring is not certified local")]
    NotLocal,
    #[error("no non-split extension is annihilated by the radical of the endomorphism ring")]
    NoAlmostSplit,
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// A polynomial matrix between sums of indecomposable projectives.
///
/// Rows index the summands of the target (`a` copies of `P_u`, then `b` of
/// `P_v`), columns those of the source. Entries are coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows_u: usize,
    pub rows_v: usize,
    pub cols_u: usize,
    pub cols_v: usize,
    pub entries: Vec<Vec<Vec<u64>>>,
}

/// A minimal projective presentation `P1 -> P0 -> X -> 0` in `H_m`.
#[derive(Clone, Debug)]
pub struct ProjPresentation {
    pub p0: RepObject,
    pub p1: RepObject,
    /// Numbers of `P_u` and `P_v` summands of `P0`.
    pub top0: (usize, usize),
    /// Numbers of `P_u` and `P_v` summands of `P1`.
    pub top1: (usize, usize),
    pub p1_map: Morphism,
    pub cover: Morphism,
    pub matrix: PolyMatrix,
}

fn repeat_block(p: u64, block: &Mat, k: usize) -> Mat {
    let mut out = Mat::zeros(p, 0, 0);
    for _ in 0..k {
        out = out.block_diag(block);
    }
    out
}

/// `P_u^a ⊕ P_v^b`. Bases: `T^i e_j` for the `U` part; in `V` first the
/// copies of `Λ_m`, then those of `Λ_n`.
pub fn proj_object(shape: Shape, a: usize, b: usize) -> RepObject {
    let (p, m, n) = (shape.p, shape.m, shape.n);
    let alpha = repeat_block(p, &jordan_block(p, m), a);
    let beta = alpha.block_diag(&repeat_block(p, &jordan_block(p, n), b));
    let iota = Mat::identity(p, a * m).vstack(&Mat::zeros(p, b * n, a * m));
    RepObject::from_parts_unchecked(shape, alpha, beta, iota)
}

/// `I_u^a ⊕ I_v^b`. The `U` part holds `a + b` copies of `Λ_m`; the last `b`
/// of them embed into the `b` copies of `Λ_n` by `T^i e ↦ T^{n-m+i} f`.
pub fn inj_object(shape: Shape, a: usize, b: usize) -> RepObject {
    let (p, m, n) = (shape.p, shape.m, shape.n);
    let alpha = repeat_block(p, &jordan_block(p, m), a + b);
    let beta = repeat_block(p, &jordan_block(p, n), b);
    let mut iota = Mat::zeros(p, b * n, (a + b) * m);
    for j in 0..b {
        for i in 0..m {
            iota.set(j * n + n - m + i, (a + j) * m + i, 1);
        }
    }
    RepObject::from_parts_unchecked(shape, alpha, beta, iota)
}

/// The morphism `P_u^a ⊕ P_v^b -> x` sending the generators to the given
/// elements of `U_x` and `V_x`.
pub fn free_map(x: &RepObject, u_imgs: &[Vec<u64>], v_imgs: &[Vec<u64>]) -> Morphism {
    let (p, m, n) = (x.p(), x.m(), x.n());
    let mut gcols = Vec::new();
    let mut hcols = Vec::new();
    for u in u_imgs {
        let mut w = u.clone();
        for _ in 0..m {
            gcols.push(w.clone());
            hcols.push(x.iota().mul_vec(&w));
            w = x.alpha().mul_vec(&w);
        }
    }
    for v in v_imgs {
        let mut w = v.clone();
        for _ in 0..n {
            hcols.push(w.clone());
            w = x.beta().mul_vec(&w);
        }
    }
    Morphism::new(Mat::from_cols(p, x.du(), &gcols), Mat::from_cols(p, x.dv(), &hcols))
}

/// Standard basis vectors completing the column space of `sub` to `F_p^d`.
fn top_complement(p: u64, d: usize, sub: &Mat) -> Vec<Vec<u64>> {
    let mut e = Echelon::new(p, d);
    for c in sub.columns() {
        e.insert(c);
    }
    let mut out = Vec::new();
    for i in 0..d {
        let mut v = vec![0; d];
        v[i] = 1;
        if e.insert(v.clone()) {
            out.push(v);
        }
    }
    out
}

/// Generators of `x` as an `H_m` object: a basis of a complement of
/// `alpha U` in `U` and of `beta V + iota U` in `V`.
pub fn top_generators(x: &RepObject) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let p = x.p();
    let u = top_complement(p, x.du(), x.alpha());
    let v = top_complement(p, x.dv(), &x.beta().hstack(x.iota()));
    (u, v)
}

/// The projective cover of `x` in `H_m`.
pub fn projective_cover_h(x: &RepObject) -> (RepObject, Morphism) {
    let (u, v) = top_generators(x);
    let p0 = proj_object(x.shape, u.len(), v.len());
    (p0, free_map(x, &u, &v))
}

/// A minimal projective presentation of `x` in `H_m`.
pub fn presentation(x: &RepObject) -> ProjPresentation {
    let (m, n) = (x.m(), x.n());
    let (u0, v0) = top_generators(x);
    let (a0, b0) = (u0.len(), v0.len());
    let p0 = proj_object(x.shape, a0, b0);
    let cover = free_map(x, &u0, &v0);
    let ku = cover.g.nullspace();
    let kv = cover.h.nullspace();
    let k = p0.subobject(&ku, &kv).object;
    let (u1, v1) = top_generators(&k);
    let u_imgs: Vec<Vec<u64>> = u1.iter().map(|w| ku.mul_vec(w)).collect();
    let v_imgs: Vec<Vec<u64>> = v1.iter().map(|w| kv.mul_vec(w)).collect();
    let (a1, b1) = (u_imgs.len(), v_imgs.len());
    let p1 = proj_object(x.shape, a1, b1);
    let p1_map = free_map(&p0, &u_imgs, &v_imgs);
    let mut entries = vec![vec![Vec::new(); a1 + b1]; a0 + b0];
    for (j, w) in u_imgs.iter().enumerate() {
        for i in 0..a0 {
            entries[i][j] = w[i * m..(i + 1) * m].to_vec();
        }
        for i in 0..b0 {
            entries[a0 + i][j] = vec![0; n];
        }
    }
    for (j, z) in v_imgs.iter().enumerate() {
        for i in 0..a0 {
            entries[i][a1 + j] = z[i * m..(i + 1) * m].to_vec();
        }
        for i in 0..b0 {
            entries[a0 + i][a1 + j] = z[a0 * m + i * n..a0 * m + (i + 1) * n].to_vec();
        }
    }
    let matrix = PolyMatrix { rows_u: a0, rows_v: b0, cols_u: a1, cols_v: b1, entries };
    ProjPresentation { p0, p1, top0: (a0, b0), top1: (a1, b1), p1_map, cover, matrix }
}

/// Multiplication by `c` as a map `Λ_cols -> Λ_rows` (truncated).
fn mult_matrix(p: u64, c: &[u64], rows: usize, cols: usize) -> Mat {
    let mut out = Mat::zeros(p, rows, cols);
    for s in 0..cols {
        for (r, &cr) in c.iter().enumerate() {
            if cr != 0 && s + r < rows {
                out.set(s + r, s, cr);
            }
        }
    }
    out
}

/// The Nakayama functor on a polynomial matrix: the morphism
/// `I_u^{cols_u} ⊕ I_v^{cols_v} -> I_u^{rows_u} ⊕ I_v^{rows_v}`.
pub fn nakayama(shape: Shape, pm: &PolyMatrix) -> (RepObject, RepObject, Morphism) {
    let (p, m, n) = (shape.p, shape.m, shape.n);
    let src = inj_object(shape, pm.cols_u, pm.cols_v);
    let tgt = inj_object(shape, pm.rows_u, pm.rows_v);
    let (ru, rv, cu, cv) = (pm.rows_u, pm.rows_v, pm.cols_u, pm.cols_v);
    let mut g = Mat::zeros(p, (ru + rv) * m, (cu + cv) * m);
    let mut h = Mat::zeros(p, rv * n, cv * n);
    for i in 0..ru + rv {
        for j in 0..cu + cv {
            let c = &pm.entries[i][j];
            if i >= ru && j < cu {
                continue;
            }
            g = g.with_block(i * m, j * m, &mult_matrix(p, c, m, m));
            if i >= ru && j >= cu {
                h = h.with_block((i - ru) * n, (j - cu) * n, &mult_matrix(p, c, n, n));
            }
        }
    }
    (src, tgt, Morphism::new(g, h))
}

/// Whether `z` (with local endomorphism ring) is a direct summand of `x`:
/// some `g ∘ f` with `f: z -> x`, `g: x -> z` from bases is invertible.
pub fn has_local_summand(x: &RepObject, z: &RepObject) -> bool {
    let fs = match hom_basis(z, x) {
        Ok(b) => b.maps,
        Err(_) => return false,
    };
    let gs = hom_basis(x, z).map(|b| b.maps).unwrap_or_default();
    fs.iter().any(|f| gs.iter().any(|g| g.compose(f).is_iso()))
}

/// A direct summand of `x` isomorphic to `P` or `Y`, if any.
pub fn projective_summand(x: &RepObject) -> Option<StandardKind> {
    for k in [StandardKind::P, StandardKind::Y] {
        let z = RepObject::standard(k, x.shape);
        if x.du() >= z.du() && x.dv() >= z.dv() && has_local_summand(x, &z) {
            return Some(k);
        }
    }
    None
}

/// The translate in `H_m`.
pub fn tau_h(x: &RepObject) -> Result<RepObject, ArError> {
    if let Some(k) = projective_summand(x) {
        return Err(ArError::ProjectiveSummand(k));
    }
    Ok(tau_h_unchecked(x))
}

/// `ker ν(p1)` without checking for projective summands (they contribute nothing).
pub fn tau_h_unchecked(x: &RepObject) -> RepObject {
    let pres = presentation(x);
    let (src, tgt, f) = nakayama(x.shape, &pres.matrix);
    debug_assert!(src.check_morphism(&tgt, &f).is_ok());
    src.subobject(&f.g.nullspace(), &f.h.nullspace()).object
}

/// The minimal monomorphic approximation `(A -> B ⊕ I)` of an `H_m` object.
///
/// `I` has one copy of `Λ_n` per socle basis vector of `ker iota`; the map to
/// it sends `x` to `Σ_k ℓ_i(alpha^{n-1-k} x) T^k` in copy `i`, where the `ℓ_i`
/// are functionals dual to the socle basis.
pub fn mimo(x: &RepObject) -> RepObject {
    let (p, n) = (x.p(), x.n());
    let du = x.du();
    let ker = x.iota().nullspace();
    if ker.cols() == 0 {
        return x.clone();
    }
    // Socle of ker iota: vectors of ker killed by alpha.
    let soc_coeffs = x.alpha().mul(&ker).nullspace();
    let soc = ker.mul(&soc_coeffs).column_space();
    let r = soc.cols();
    // Functionals: rows of the inverse of [soc | complement].
    let comp = top_complement(p, du, &soc);
    let full = soc.hstack(&Mat::from_cols(p, du, &comp));
    let inv = full.inverse().expect("socle and complement span U");
    let mut e = Mat::zeros(p, r * n, du);
    let mut apow = vec![Mat::identity(p, du)];
    for k in 1..n {
        apow.push(apow[k - 1].mul(x.alpha()));
    }
    for i in 0..r {
        let ell = Mat::from_vec(p, 1, du, inv.row(i).to_vec());
        for k in 0..n {
            let row = ell.mul(&apow[n - 1 - k]);
            for c in 0..du {
                e.set(i * n + k, c, row.get(0, c));
            }
        }
    }
    let beta = x.beta().block_diag(&repeat_block(p, &jordan_block(p, n), r));
    let iota = x.iota().vstack(&e);
    RepObject::from_parts_unchecked(x.shape, x.alpha().clone(), beta, iota)
}

/// The minimal left approximation `(im iota ⊆ V)`.
pub fn left_approx(x: &RepObject) -> RepObject {
    let im = x.iota().column_space();
    let alpha = crate::rep::solve_exact(&im, &x.beta().mul(&im));
    RepObject::from_parts_unchecked(x.shape, alpha, x.beta().clone(), im)
}

/// The relatively projective type of an indecomposable object, if any.
pub fn relative_projective_kind(x: &RepObject) -> Option<StandardKind> {
    [StandardKind::P, StandardKind::Y].into_iter().find(|&k| same_indecomposable(x, &RepObject::standard(k, x.shape)))
}

/// The relatively injective type of an indecomposable object, if any.
pub fn relative_injective_kind(x: &RepObject) -> Option<StandardKind> {
    [StandardKind::I, StandardKind::Y].into_iter().find(|&k| same_indecomposable(x, &RepObject::standard(k, x.shape)))
}

/// Isomorphism test for objects known to be indecomposable.
pub fn same_indecomposable(x: &RepObject, y: &RepObject) -> bool {
    x.shape == y.shape && fingerprint(x) == fingerprint(y) && local_iso(x, y).is_some()
}

/// Removes one direct summand isomorphic to `z` (with local endomorphism
/// ring) from `x`, returning the complement, or `None` if there is none.
///
/// With `f: z -> x`, `g: x -> z` and `g ∘ f` invertible, `x = im f ⊕ ker g`.
pub fn strip_summand(x: &RepObject, z: &RepObject) -> Option<RepObject> {
    let fs = hom_basis(z, x).ok()?.maps;
    let gs = hom_basis(x, z).ok()?.maps;
    for f in &fs {
        for g in &gs {
            if g.compose(f).is_iso() {
                return Some(x.subobject(&g.g.nullspace(), &g.h.nullspace()).object);
            }
        }
    }
    None
}

/// The relative translate: `Mimo ∘ τ_H` with the relatively injective
/// summands (copies of `I` and `Y`) removed.
pub fn tau_s(x: &RepObject) -> Result<RepObject, ArError> {
    if x.is_zero() {
        return Err(ArError::Zero);
    }
    if let Some(k) = projective_summand(x) {
        return Err(ArError::RelativelyProjective(k));
    }
    let mut out = mimo(&tau_h_unchecked(x));
    for k in [StandardKind::I, StandardKind::Y] {
        let z = RepObject::standard(k, x.shape);
        while out.du() >= z.du() && out.dv() >= z.dv() {
            match strip_summand(&out, &z) {
                Some(rest) => out = rest,
                None => break,
            }
        }
    }
    Ok(out)
}

/// How a τ-orbit walk ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitEnd {
    /// The last member is relatively projective.
    RelativeProjective(StandardKind),
    /// `τ^period` of the last member is isomorphic to the member at `index`.
    Repeats { index: usize, period: usize },
    /// The step cap was reached.
    Cap,
}

/// The members `x, τx, τ²x, ...` visited by an orbit walk.
#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub members: Vec<RepObject>,
    pub end: OrbitEnd,
}

impl OrbitReport {
    /// Number of pairwise non-isomorphic members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The period when the walk closed up at its starting object.
    pub fn period(&self) -> Option<usize> {
        match self.end {
            OrbitEnd::Repeats { index: 0, period } => Some(period),
            _ => None,
        }
    }
}

/// The almost split sequence `0 -> τ_S X -> E -> X -> 0` ending at `X`.
#[derive(Clone, Debug)]
pub struct ArSeqReport {
    pub x: RepObject,
    pub tau_x: RepObject,
    pub middle: RepObject,
    /// `τ_S X -> E`.
    pub left: Morphism,
    /// `E -> X`.
    pub right: Morphism,
    pub dims_add: bool,
    pub composition_zero: bool,
    /// `left` is injective, `right` is surjective, and exactness holds in
    /// the middle on both `U` and `V`.
    pub exact: bool,
    /// The extension class is not a coboundary.
    pub non_split: bool,
}

impl ArSeqReport {
    pub fn verified(&self) -> bool {
        self.dims_add && self.composition_zero && self.exact && self.non_split
    }
}

/// Builds the almost split sequence ending at the indecomposable `x`, which
/// must not be relatively projective. The class is a non-split extension of
/// `x` by `τ_S x` whose pullback along every radical endomorphism of `x`
/// splits.
pub fn ar_sequence(x: &RepObject, rng: &mut Rng, opts: &DecomposeOptions) -> Result<ArSeqReport, ArError> {
    let tau_x = tau_s(x)?;
    let rad = end_radical(x, rng, opts).ok_or(ArError::NotLocal)?;
    let sp = ExtensionSpace::new(x, &tau_x)?;
    let p = x.p();
    let nvar = sp.nvar();
    // Reduction modulo the split classes is linear with kernel the split
    // classes, so it identifies Ext^1(x, τx) with a coordinate subspace.
    let mut split = Echelon::new(p, nvar);
    for c in sp.coboundaries().columns() {
        split.insert(c);
    }
    let mut ext = split.clone();
    let classes: Vec<Vec<u64>> = sp.cocycles.columns().into_iter().filter(|c| ext.insert(c.clone())).collect();
    // A class Σ s_j e_j lies in the socle when every pullback along a radical
    // endomorphism reduces to zero: one equation in s per coordinate.
    let d = classes.len();
    let mut eqs = Echelon::new(p, d);
    for f in &rad {
        let reduced: Vec<Vec<u64>> = classes.iter().map(|e| split.reduce(sp.pullback(e, f))).collect();
        for i in 0..nvar {
            let row: Vec<u64> = reduced.iter().map(|r| r[i]).collect();
            if row.iter().any(|&v| v != 0) && eqs.insert(row) && eqs.rank() == d {
                return Err(ArError::NoAlmostSplit);
            }
        }
    }
    let (rref, _) = eqs.to_rref();
    let socle = if rref.rows() == 0 { Mat::identity(p, d) } else { rref.nullspace() };
    if socle.cols() == 0 {
        return Err(ArError::NoAlmostSplit);
    }
    let coeffs = socle.col(0);
    let mut class = vec![0u64; nvar];
    for (e, &c) in classes.iter().zip(&coeffs) {
        for (v, &x) in class.iter_mut().zip(e) {
            *v = (*v + c * x) % p;
        }
    }
    let middle = sp.middle(&class)?;
    let (left, right) = (sp.inclusion(), sp.projection());
    let dims_add = middle.du() == x.du() + tau_x.du() && middle.dv() == x.dv() + tau_x.dv();
    let composition_zero = right.compose(&left).is_zero();
    let exact = left.g.rank() == tau_x.du()
        && left.h.rank() == tau_x.dv()
        && right.g.rank() == x.du()
        && right.h.rank() == x.dv()
        && middle.check_morphism(x, &right).is_ok()
        && tau_x.check_morphism(&middle, &left).is_ok();
    Ok(ArSeqReport { x: x.clone(), tau_x, middle, left, right, dims_add, composition_zero, exact, non_split: true })
}

/// Iterates `τ_S` from an indecomposable `x`.
pub fn tau_orbit(x: &RepObject, max_steps: usize) -> Result<OrbitReport, ArError> {
    let mut members = vec![x.clone()];
    for _ in 0..max_steps {
        let cur = members.last().unwrap();
        if let Some(k) = relative_projective_kind(cur) {
            return Ok(OrbitReport { members, end: OrbitEnd::RelativeProjective(k) });
        }
        let next = tau_s(cur)?;
        if let Some(index) = members.iter().position(|y| same_indecomposable(y, &next)) {
            let period = members.len() - index;
            return Ok(OrbitReport { members, end: OrbitEnd::Repeats { index, period } });
        }
        members.push(next);
    }
    let cur = members.last().unwrap();
    if let Some(k) = relative_projective_kind(cur) {
        return Ok(OrbitReport { members, end: OrbitEnd::RelativeProjective(k) });
    }
    Ok(OrbitReport { members, end: OrbitEnd::Cap })
}

/// Sink map `(rad Λ_m ⊆ Λ_m) -> P` of the projective `P`.
pub fn sink_map_p(shape: Shape) -> (RepObject, Morphism) {
    let pobj = RepObject::standard(StandardKind::P, shape);
    let rad_u = pobj.alpha().column_space();
    let s = pobj.subobject(&rad_u, &Mat::identity(shape.p, pobj.dv()));
    (s.object, Morphism::new(s.u_basis, s.v_basis))
}

/// Source map `I -> (soc^m Λ / soc ⊆ Λ / soc)` of the injective `I`.
pub fn source_map_i(shape: Shape) -> (RepObject, Morphism) {
    let iobj = RepObject::standard(StandardKind::I, shape);
    let soc_v = iobj.beta().nullspace();
    let soc_u = iobj.alpha().nullspace();
    let (q, proj) = iobj.quotient(&soc_u, &soc_v);
    debug_assert!(q.in_s());
    (q, proj)
}

/// Whether `f: x -> z` factors as `via ∘ t` for some `t: x -> w`, where `via: w -> z`.
pub fn factors_through(x: &RepObject, w: &RepObject, via: &Morphism, f: &Morphism) -> Result<bool, RepError> {
    let hb = hom_basis(x, w)?;
    let p = x.p();
    let len = f.to_vec().len();
    let cols: Vec<Vec<u64>> = hb.maps.iter().map(|t| via.compose(t).to_vec()).collect();
    if cols.is_empty() {
        return Ok(f.is_zero());
    }
    let a = Mat::from_cols(p, len, &cols);
    let b = Mat::from_cols(p, len, &[f.to_vec()]);
    Ok(a.solve(&b).map_err(RepError::Linalg)?.is_some())
}

/// Whether `f: z -> x` factors as `t ∘ via` for some `t: w -> x`, where `via: z -> w`.
pub fn factors_from(w: &RepObject, x: &RepObject, via: &Morphism, f: &Morphism) -> Result<bool, RepError> {
    let hb = hom_basis(w, x)?;
    let p = x.p();
    let len = f.to_vec().len();
    let cols: Vec<Vec<u64>> = hb.maps.iter().map(|t| t.compose(via).to_vec()).collect();
    if cols.is_empty() {
        return Ok(f.is_zero());
    }
    let a = Mat::from_cols(p, len, &cols);
    let b = Mat::from_cols(p, len, &[f.to_vec()]);
    Ok(a.solve(&b).map_err(RepError::Linalg)?.is_some())
}

/// A node of an AR quiver.
#[derive(Clone, Debug)]
pub struct QuiverNode {
    pub dims: DimPair,
    pub fingerprint: Vec<usize>,
    /// Index of the τ-orbit the node belongs to.
    pub orbit: usize,
}

/// The AR quiver of a complete catalog of indecomposables.
#[derive(Clone, Debug)]
pub struct ArQuiver {
    pub nodes: Vec<QuiverNode>,
    /// Arrows `(from, to, multiplicity)`.
    pub arrows: Vec<(usize, usize, usize)>,
    /// `tau[i] = Some(j)` when `τ_S` of node `i` is node `j`.
    pub tau: Vec<Option<usize>>,
    /// Orbits with the stability flag, as lists of nodes along `τ^{-1}`.
    pub orbits: Vec<(Vec<usize>, bool)>,
}

/// Index of the catalog entry isomorphic to the indecomposable `x`.
pub fn lookup(catalog: &[RepObject], x: &RepObject) -> Option<usize> {
    let f = fingerprint(x);
    catalog.iter().position(|y| fingerprint(y) == f && local_iso(y, x).is_some())
}

/// `τ_S` on every catalog entry, as catalog indices.
pub fn tau_table(catalog: &[RepObject]) -> Result<Vec<Option<usize>>, ArError> {
    let mut out = Vec::with_capacity(catalog.len());
    for x in catalog {
        if relative_projective_kind(x).is_some() {
            out.push(None);
            continue;
        }
        let t = tau_s(x)?;
        let j = lookup(catalog, &t).ok_or_else(|| ArError::Rep(RepError::Invalid("τ_S of an entry is missing from the catalog".into())))?;
        out.push(Some(j));
    }
    Ok(out)
}

/// `τ_S^{-1}` of a catalog entry by inverse lookup in a τ table.
pub fn tau_inverse(tau: &[Option<usize>], i: usize) -> Option<usize> {
    tau.iter().position(|&t| t == Some(i))
}

/// Bases of `rad(M, N)` for all pairs of catalog entries.
fn radical_spaces(catalog: &[RepObject], rng: &mut Rng) -> Result<Vec<Vec<Vec<Morphism>>>, ArError> {
    let opts = DecomposeOptions::default();
    let mut out = Vec::with_capacity(catalog.len());
    for (i, m) in catalog.iter().enumerate() {
        let mut row = Vec::with_capacity(catalog.len());
        for (j, n) in catalog.iter().enumerate() {
            if i == j {
                let r = end_radical(m, rng, &opts).ok_or_else(|| ArError::Rep(RepError::Invalid(format!("no radical certificate for entry {i}"))))?;
                row.push(r);
            } else {
                row.push(hom_basis(m, n)?.maps);
            }
        }
        out.push(row);
    }
    Ok(out)
}

/// `dim rad(M,N) / rad²(M,N)` from precomputed radical spaces.
fn irr_from_spaces(rad: &[Vec<Vec<Morphism>>], i: usize, j: usize) -> usize {
    let target = rad[i][j].len();
    if target == 0 {
        return 0;
    }
    let p = rad[i][j][0].g.modulus();
    let len = rad[i][j][0].to_vec().len();
    let mut e = Echelon::new(p, len);
    for z in 0..rad.len() {
        for f in &rad[i][z] {
            for g in &rad[z][j] {
                e.insert(g.compose(f).to_vec());
                if e.rank() == target {
                    return 0;
                }
            }
        }
    }
    target - e.rank()
}

/// The multiplicity of irreducible maps `catalog[i] -> catalog[j]`.
pub fn irr_multiplicity(catalog: &[RepObject], i: usize, j: usize, rng: &mut Rng) -> Result<usize, ArError> {
    let rad = radical_spaces(catalog, rng)?;
    Ok(irr_from_spaces(&rad, i, j))
}

/// Groups catalog entries into τ-orbits, each listed along `τ^{-1}`:
/// first the chains starting at relatively projective entries, then the
/// cycles. Returns the orbit index of every entry and the orbits with their
/// stability flag (no member is one of `P`, `I`, `Y`).
pub fn tau_orbits(catalog: &[RepObject], tau: &[Option<usize>]) -> (Vec<usize>, Vec<(Vec<usize>, bool)>) {
    let k = catalog.len();
    let mut orbit_of = vec![usize::MAX; k];
    let mut orbits = Vec::new();
    let starts: Vec<usize> = (0..k).filter(|&i| tau[i].is_none()).collect();
    for s in starts {
        let mut chain = vec![s];
        let mut cur = s;
        while let Some(nx) = tau_inverse(tau, cur) {
            if chain.contains(&nx) {
                break;
            }
            chain.push(nx);
            cur = nx;
        }
        for &c in &chain {
            orbit_of[c] = orbits.len();
        }
        orbits.push((chain, false));
    }
    for s in 0..k {
        if orbit_of[s] != usize::MAX {
            continue;
        }
        let mut chain = vec![s];
        let mut cur = s;
        while let Some(nx) = tau_inverse(tau, cur) {
            if nx == s || chain.contains(&nx) {
                break;
            }
            chain.push(nx);
            cur = nx;
        }
        for &c in &chain {
            orbit_of[c] = orbits.len();
        }
        orbits.push((chain, true));
    }
    // An orbit is stable iff it contains none of P, I, Y.
    for (chain, stable) in orbits.iter_mut() {
        *stable = chain.iter().all(|&c| relative_projective_kind(&catalog[c]).is_none() && relative_injective_kind(&catalog[c]).is_none());
    }
    (orbit_of, orbits)
}

/// Assembles the AR quiver of a complete catalog.
pub fn ar_quiver(catalog: &[RepObject], rng: &mut Rng) -> Result<ArQuiver, ArError> {
    let k = catalog.len();
    let tau = tau_table(catalog)?;
    let rad = radical_spaces(catalog, rng)?;
    let mut arrows = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let c = irr_from_spaces(&rad, i, j);
            if c > 0 {
                arrows.push((i, j, c));
            }
        }
    }
    let (orbit_of, orbits) = tau_orbits(catalog, &tau);
    let nodes = catalog.iter().enumerate().map(|(i, x)| QuiverNode { dims: x.dims(), fingerprint: fingerprint(x), orbit: orbit_of[i] }).collect();
    Ok(ArQuiver { nodes, arrows, tau, orbits })
}

/// A mesh whose dimension count fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshFailure {
    pub node: usize,
    pub middle: DimPair,
    pub expected: DimPair,
}

impl ArQuiver {
    /// Total multiplicity of all arrows.
    pub fn total_arrows(&self) -> usize {
        self.arrows.iter().map(|a| a.2).sum()
    }

    /// Multiplicity of the arrow `i -> j`.
    pub fn arrow(&self, i: usize, j: usize) -> usize {
        self.arrows.iter().find(|a| a.0 == i && a.1 == j).map_or(0, |a| a.2)
    }

    /// Whether the underlying undirected graph is connected.
    pub fn is_connected(&self) -> bool {
        let k = self.nodes.len();
        if k == 0 {
            return true;
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b, _) in &self.arrows {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Checks `Σ_N irr(M,N)·dims(N) = dims(M) + dims(τ^{-1} M)` for every `M`
    /// with a `τ`-inverse in the catalog.
    pub fn mesh_failures(&self) -> Vec<MeshFailure> {
        let mut out = Vec::new();
        for i in 0..self.nodes.len() {
            let Some(t) = tau_inverse(&self.tau, i) else { continue };
            let mut middle = DimPair { du: 0, dv: 0 };
            for &(a, b, c) in &self.arrows {
                if a == i {
                    for _ in 0..c {
                        middle = middle.add(self.nodes[b].dims);
                    }
                }
            }
            let expected = self.nodes[i].dims.add(self.nodes[t].dims);
            if middle != expected {
                out.push(MeshFailure { node: i, middle, expected });
            }
        }
        out
    }

    /// Graphviz output; stable orbits are grouped into clusters.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph ar_quiver {\n  rankdir=LR;\n");
        let mut clustered: BTreeMap<usize, ()> = BTreeMap::new();
        for (o, (chain, stable)) in self.orbits.iter().enumerate() {
            if *stable {
                let _ = writeln!(s, "  subgraph cluster_orbit{o} {{\n    label=\"stable orbit {o}\";");
                for &c in chain {
                    let _ = writeln!(s, "    n{c} [label=\"{}\"];", self.label(c));
                    clustered.insert(c, ());
                }
                s.push_str("  }\n");
            }
        }
        for i in 0..self.nodes.len() {
            if !clustered.contains_key(&i) {
                let _ = writeln!(s, "  n{i} [label=\"{}\"];", self.label(i));
            }
        }
        for &(a, b, c) in &self.arrows {
            let _ = writeln!(s, "  n{a} -> n{b} [weight={c}, label=\"{c}\"];");
        }
        for (i, t) in self.tau.iter().enumerate() {
            if let Some(j) = t {
                let _ = writeln!(s, "  n{i} -> n{j} [style=dashed, constraint=false];");
            }
        }
        s.push_str("}\n");
        s
    }

    fn label(&self, i: usize) -> String {
        let n = &self.nodes[i];
        format!("{} #{}", n.dims, fingerprint_hash(&n.fingerprint))
    }
}

/// Short stable hash of a fingerprint (FNV-1a, 32 bits, hex).
pub fn fingerprint_hash(f: &[usize]) -> String {
    let mut h: u32 = 0x811c_9dc5;
    for &x in f {
        for b in (x as u64).to_le_bytes() {
            h ^= b as u32;
            h = h.wrapping_mul(0x0100_0193);
        }
    }
    format!("{h:08x}")
}
