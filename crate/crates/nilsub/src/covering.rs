//! Graded objects: representations of the covering quiver with vertices
//! `i` and `i'` for `i ∈ Z`, arrows `beta_i: M_i -> M_{i-1}`,
//! `alpha_i: M'_i -> M'_{i-1}` and `iota_i: M'_i -> M_i`, subject to
//! `iota_{i-1}·alpha_i = beta_i·iota_i` and the nilpotency bounds
//! `m` (on alphas) and `n` (on betas).
//!
//! The covering functor forgets the grading. A column of height `h` with top
//! at degree `t` has `T^e x` in degree `t - e`.

use crate::hom::hom_dim;
use crate::linalg::{Echelon, Mat};
use crate::rep::{BoxDiagram, Morphism, RepError, RepObject, Shape, StandardKind, Term};
use crate::rng::Rng;
use rand::Rng as _;

/// A representation of the covering quiver supported on a finite window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRep {
    pub shape: Shape,
    /// Degree of the first position of the window.
    pub lo: i64,
    /// `beta[k]`: `M_{lo+k} -> M_{lo+k-1}` (zero target for `k = 0`).
    pub beta: Vec<Mat>,
    /// `alpha[k]`: `M'_{lo+k} -> M'_{lo+k-1}`.
    pub alpha: Vec<Mat>,
    /// `iota[k]`: `M'_{lo+k} -> M_{lo+k}`.
    pub iota: Vec<Mat>,
}

impl GradedRep {
    /// Builds and validates a graded object from the maps at each position.
    pub fn new(shape: Shape, lo: i64, beta: Vec<Mat>, alpha: Vec<Mat>, iota: Vec<Mat>) -> Result<Self, RepError> {
        let g = Self { shape, lo, beta, alpha, iota };
        g.validate()?;
        Ok(g)
    }

    /// The empty graded object.
    pub fn zero(shape: Shape) -> Self {
        Self { shape, lo: 0, beta: Vec::new(), alpha: Vec::new(), iota: Vec::new() }
    }

    /// Number of positions in the window.
    pub fn len(&self) -> usize {
        self.iota.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total_dims().iter().all(|&d| d == 0)
    }

    /// Last degree of the window.
    pub fn hi(&self) -> i64 {
        self.lo + self.len() as i64 - 1
    }

    /// `dim M_i` along the window.
    pub fn total_dims(&self) -> Vec<usize> {
        self.iota.iter().map(|m| m.rows()).collect()
    }

    /// `dim M'_i` along the window.
    pub fn sub_dims(&self) -> Vec<usize> {
        self.iota.iter().map(|m| m.cols()).collect()
    }

    /// `(dim M_i, dim M'_i)` at degree `i` (zero outside the window).
    pub fn dims_at(&self, i: i64) -> (usize, usize) {
        match self.index(i) {
            Some(k) => (self.iota[k].rows(), self.iota[k].cols()),
            None => (0, 0),
        }
    }

    fn index(&self, i: i64) -> Option<usize> {
        if i < self.lo || i > self.hi() {
            None
        } else {
            Some((i - self.lo) as usize)
        }
    }

    /// Checks shapes, commutativity, nilpotency bounds.
    pub fn validate(&self) -> Result<(), RepError> {
        let k = self.len();
        if self.beta.len() != k || self.alpha.len() != k {
            return Err(RepError::Invalid("window lengths differ".into()));
        }
        for j in 0..k {
            let (d, dp) = (self.iota[j].rows(), self.iota[j].cols());
            let (prev, prevp) = if j == 0 { (0, 0) } else { (self.iota[j - 1].rows(), self.iota[j - 1].cols()) };
            if self.beta[j].rows() != prev || self.beta[j].cols() != d {
                return Err(RepError::Invalid(format!("beta at position {j} has the wrong shape")));
            }
            if self.alpha[j].rows() != prevp || self.alpha[j].cols() != dp {
                return Err(RepError::Invalid(format!("alpha at position {j} has the wrong shape")));
            }
            if j > 0 && self.iota[j - 1].mul(&self.alpha[j]) != self.beta[j].mul(&self.iota[j]) {
                return Err(RepError::Invalid(format!("square at position {j} does not commute")));
            }
        }
        let f = self.cover();
        if !f.beta().pow(self.shape.n as u64).is_zero() || !f.alpha().pow(self.shape.m as u64).is_zero() {
            return Err(RepError::Invalid("nilpotency bound violated".into()));
        }
        Ok(())
    }

    /// All `iota_i` are injective.
    pub fn in_s(&self) -> bool {
        self.iota.iter().all(|m| m.rank() == m.cols())
    }

    /// The window translated by `k`; matrices are unchanged.
    pub fn shift(&self, k: i64) -> GradedRep {
        let mut g = self.clone();
        g.lo += k;
        g
    }

    /// Trims empty positions at both ends and moves the window to start at 0.
    pub fn normalize(&self) -> GradedRep {
        let dims: Vec<(usize, usize)> = (0..self.len()).map(|k| (self.iota[k].rows(), self.iota[k].cols())).collect();
        let Some(first) = dims.iter().position(|&d| d != (0, 0)) else { return GradedRep::zero(self.shape) };
        let last = dims.iter().rposition(|&d| d != (0, 0)).unwrap();
        let p = self.shape.p;
        let mut beta: Vec<Mat> = self.beta[first..=last].to_vec();
        let mut alpha: Vec<Mat> = self.alpha[first..=last].to_vec();
        let iota: Vec<Mat> = self.iota[first..=last].to_vec();
        beta[0] = Mat::zeros(p, 0, iota[0].rows());
        alpha[0] = Mat::zeros(p, 0, iota[0].cols());
        GradedRep { shape: self.shape, lo: 0, beta, alpha, iota }
    }

    /// The covering functor: `(⊕ M'_i ⊆ ⊕ M_i)` with block maps.
    pub fn cover(&self) -> RepObject {
        let p = self.shape.p;
        let dims = self.total_dims();
        let subs = self.sub_dims();
        let off = prefix(&dims);
        let offs = prefix(&subs);
        let dv = off[dims.len()];
        let du = offs[subs.len()];
        let mut beta = Mat::zeros(p, dv, dv);
        let mut alpha = Mat::zeros(p, du, du);
        let mut iota = Mat::zeros(p, dv, du);
        for k in 0..self.len() {
            if k > 0 {
                beta = beta.with_block(off[k - 1], off[k], &self.beta[k]);
                alpha = alpha.with_block(offs[k - 1], offs[k], &self.alpha[k]);
            }
            iota = iota.with_block(off[k], offs[k], &self.iota[k]);
        }
        RepObject::from_parts_unchecked(self.shape, alpha, beta, iota)
    }

    /// Direct sum, with windows merged.
    pub fn direct_sum(&self, o: &GradedRep) -> Result<GradedRep, RepError> {
        if self.shape != o.shape {
            return Err(RepError::Mismatch(format!("{} vs {}", self.shape, o.shape)));
        }
        if self.is_empty() {
            return Ok(o.clone());
        }
        if o.is_empty() {
            return Ok(self.clone());
        }
        let lo = self.lo.min(o.lo);
        let hi = self.hi().max(o.hi());
        let a = self.extend(lo, hi);
        let b = o.extend(lo, hi);
        let k = a.len();
        let beta = (0..k).map(|j| a.beta[j].block_diag(&b.beta[j])).collect();
        let alpha = (0..k).map(|j| a.alpha[j].block_diag(&b.alpha[j])).collect();
        let iota = (0..k).map(|j| a.iota[j].block_diag(&b.iota[j])).collect();
        Ok(GradedRep { shape: self.shape, lo, beta, alpha, iota })
    }

    /// The same object on the larger window `[lo, hi]`.
    pub fn extend(&self, lo: i64, hi: i64) -> GradedRep {
        let p = self.shape.p;
        let mut beta = Vec::new();
        let mut alpha = Vec::new();
        let mut iota = Vec::new();
        for i in lo..=hi {
            let (d, dp) = self.dims_at(i);
            let (e, ep) = if i == lo { (0, 0) } else { self.dims_at(i - 1) };
            match self.index(i) {
                Some(k) if i > lo && k > 0 => {
                    beta.push(self.beta[k].clone());
                    alpha.push(self.alpha[k].clone());
                }
                _ => {
                    beta.push(Mat::zeros(p, e, d));
                    alpha.push(Mat::zeros(p, ep, dp));
                }
            }
            iota.push(match self.index(i) {
                Some(k) => self.iota[k].clone(),
                None => Mat::zeros(p, d, dp),
            });
        }
        GradedRep { shape: self.shape, lo, beta, alpha, iota }
    }

    /// The graded object of a box diagram with column tops at the given
    /// degrees; every generator must be homogeneous.
    pub fn from_box_diagram(d: &BoxDiagram, tops: &[i64], shape: Shape) -> Result<GradedRep, RepError> {
        if tops.len() != d.columns.len() {
            return Err(RepError::Invalid("one top degree per column is required".into()));
        }
        let x = RepObject::from_box_diagram(d, shape)?;
        let offsets = d.offsets();
        // Degree of every basis vector of V.
        let mut deg = vec![0i64; x.dv()];
        for (c, &h) in d.columns.iter().enumerate() {
            for e in 0..h {
                deg[offsets[c] + e] = tops[c] - e as i64;
            }
        }
        let mut gen_deg = Vec::new();
        for (gi, g) in d.generators.iter().enumerate() {
            let mut dg = None;
            for t in g {
                let dt = tops[t.col - 1] - t.exp as i64;
                if dg.is_some_and(|v| v != dt) {
                    return Err(RepError::Invalid(format!("generator {} is not homogeneous", gi + 1)));
                }
                dg = Some(dt);
            }
            gen_deg.push(dg.unwrap_or(0));
        }
        let vectors: Vec<(Vec<u64>, i64)> = {
            let p = shape.p;
            let mut out = Vec::new();
            for (g, &dg) in d.generators.iter().zip(&gen_deg) {
                let mut v = vec![0u64; x.dv()];
                for t in g {
                    let i = offsets[t.col - 1] + t.exp;
                    v[i] = (v[i] + crate::linalg::reduce_i64(t.coeff, p)) % p;
                }
                let mut k = 0;
                while v.iter().any(|&c| c != 0) {
                    out.push((v.clone(), dg - k));
                    v = x.beta().mul_vec(&v);
                    k += 1;
                }
            }
            out
        };
        graded_from_vectors(shape, x.beta(), &deg, &vectors)
    }

    /// `P[i]`, `I[i]`, `Y[i]`: one column with top at degree `i`.
    pub fn standard(kind: StandardKind, shape: Shape, i: i64) -> GradedRep {
        let (m, n) = (shape.m, shape.n);
        let d = match kind {
            StandardKind::P => BoxDiagram::from_triples(&[m], &[&[(1, 0, 1)]]),
            StandardKind::I => BoxDiagram::from_triples(&[n], &[&[(1, n - m, 1)]]),
            StandardKind::Y => BoxDiagram::from_triples(&[n], &[]),
        };
        Self::from_box_diagram(&d, &[i], shape).expect("standard diagrams are homogeneous")
    }

    /// A random graded object from a box diagram with random tops and
    /// homogeneous generators inside `soc^m`.
    pub fn random(rng: &mut Rng, shape: Shape, max_columns: usize, max_generators: usize, spread: i64) -> GradedRep {
        let s = rng.gen_range(1..=max_columns.max(1));
        let columns: Vec<usize> = (0..s).map(|_| rng.gen_range(1..=shape.n)).collect();
        let tops: Vec<i64> = (0..s).map(|_| rng.gen_range(0..=spread)).collect();
        let ng = rng.gen_range(0..=max_generators);
        let mut generators = Vec::new();
        for _ in 0..ng {
            // Pick a degree reachable inside soc^m of some column.
            let c0 = rng.gen_range(0..s);
            let lo = columns[c0].saturating_sub(shape.m);
            let e0 = rng.gen_range(lo..columns[c0]);
            let dg = tops[c0] - e0 as i64;
            let mut g = vec![Term::new(c0 + 1, e0, rng.gen_range(1..shape.p) as i64)];
            for c in 0..s {
                if c == c0 {
                    continue;
                }
                let e = tops[c] - dg;
                if e >= 0 && (e as usize) < columns[c] && (e as usize) >= columns[c].saturating_sub(shape.m) && rng.gen_bool(0.5) {
                    g.push(Term::new(c + 1, e as usize, rng.gen_range(1..shape.p) as i64));
                }
            }
            generators.push(g);
        }
        let d = BoxDiagram { columns, generators };
        Self::from_box_diagram(&d, &tops, shape).expect("random graded diagrams are valid")
    }
}

fn prefix(d: &[usize]) -> Vec<usize> {
    let mut out = vec![0];
    for &x in d {
        out.push(out.last().unwrap() + x);
    }
    out
}

/// Builds the graded object of an ungraded `(U ⊆ V)` whose `V` basis vectors
/// have the given degrees and whose `U` is spanned by homogeneous vectors.
fn graded_from_vectors(shape: Shape, beta: &Mat, deg: &[i64], vectors: &[(Vec<u64>, i64)]) -> Result<GradedRep, RepError> {
    let p = shape.p;
    if deg.is_empty() {
        return Ok(GradedRep::zero(shape));
    }
    let lo = *deg.iter().min().unwrap();
    let hi = *deg.iter().max().unwrap();
    let k = (hi - lo + 1) as usize;
    let idx: Vec<Vec<usize>> = (0..k).map(|j| (0..deg.len()).filter(|&i| deg[i] == lo + j as i64).collect()).collect();
    // Homogeneous U pieces in local coordinates.
    let mut subs: Vec<Echelon> = idx.iter().map(|ix| Echelon::new(p, ix.len())).collect();
    let mut sub_vecs: Vec<Vec<Vec<u64>>> = vec![Vec::new(); k];
    for (v, dg) in vectors {
        let j = (dg - lo) as usize;
        let local: Vec<u64> = idx[j].iter().map(|&i| v[i]).collect();
        if subs[j].insert(local.clone()) {
            sub_vecs[j].push(local);
        }
    }
    let mut beta_g = Vec::with_capacity(k);
    let mut alpha_g = Vec::with_capacity(k);
    let mut iota_g = Vec::with_capacity(k);
    for j in 0..k {
        let d = idx[j].len();
        let iota = Mat::from_cols(p, d, &sub_vecs[j]);
        if j == 0 {
            beta_g.push(Mat::zeros(p, 0, d));
            alpha_g.push(Mat::zeros(p, 0, sub_vecs[j].len()));
        } else {
            let b = beta.select_rows(&idx[j - 1]).select_cols(&idx[j]);
            let prev_iota = Mat::from_cols(p, idx[j - 1].len(), &sub_vecs[j - 1]);
            let image = b.mul(&iota);
            let a = if image.cols() == 0 {
                Mat::zeros(p, sub_vecs[j - 1].len(), 0)
            } else if prev_iota.cols() == 0 {
                if !image.is_zero() {
                    return Err(RepError::Invalid("subspace is not invariant".into()));
                }
                Mat::zeros(p, 0, image.cols())
            } else {
                prev_iota.solve(&image).map_err(RepError::Linalg)?.ok_or_else(|| RepError::Invalid("subspace is not invariant".into()))?
            };
            beta_g.push(b);
            alpha_g.push(a);
        }
        iota_g.push(iota);
    }
    GradedRep::new(shape, lo, beta_g, alpha_g, iota_g)
}

/// Basis of degree-0 morphisms `m -> n`, as morphisms between the covers.
pub fn graded_hom(m: &GradedRep, n: &GradedRep) -> Result<Vec<Morphism>, RepError> {
    if m.shape != n.shape {
        return Err(RepError::Mismatch(format!("{} vs {}", m.shape, n.shape)));
    }
    let p = m.shape.p;
    let (fm, fn_) = (m.cover(), n.cover());
    if m.is_empty() || n.is_empty() {
        return Ok(Vec::new());
    }
    let lo = m.lo.min(n.lo);
    let hi = m.hi().max(n.hi());
    let a = m.extend(lo, hi);
    let b = n.extend(lo, hi);
    let k = a.len();
    // Unknowns: per position the entries of g_i (sub) and h_i (total), column-major.
    let mut gofs = Vec::with_capacity(k);
    let mut hofs = Vec::with_capacity(k);
    let mut nvar = 0;
    for j in 0..k {
        gofs.push(nvar);
        nvar += a.iota[j].cols() * b.iota[j].cols();
        hofs.push(nvar);
        nvar += a.iota[j].rows() * b.iota[j].rows();
    }
    if nvar == 0 {
        return Ok(Vec::new());
    }
    let mut rows: Vec<Vec<u64>> = Vec::new();
    // Equation helpers: coefficient rows for (L·X·R) entries.
    let mut add_eq = |terms: Vec<(usize, usize, usize, &Mat, &Mat, u64)>, out_rows: usize, out_cols: usize| {
        // Each term: variable block at offset `off` with shape (r x c), contributes sign * L · X · R.
        for oi in 0..out_rows {
            for oj in 0..out_cols {
                let mut row = vec![0u64; nvar];
                for &(off, r, c, l, rr, sign) in &terms {
                    for x in 0..r {
                        let lv = l.get(oi, x);
                        if lv == 0 {
                            continue;
                        }
                        for y in 0..c {
                            let rv = rr.get(y, oj);
                            if rv == 0 {
                                continue;
                            }
                            let v = &mut row[off + y * r + x];
                            *v = (*v + sign * (lv * rv % p)) % p;
                        }
                    }
                }
                rows.push(row);
            }
        }
    };
    for j in 0..k {
        let (dm, dmp) = (a.iota[j].rows(), a.iota[j].cols());
        let (dn, dnp) = (b.iota[j].rows(), b.iota[j].cols());
        // h_j · iota^M_j = iota^N_j · g_j
        let id_dn = Mat::identity(p, dn);
        let id_dmp = Mat::identity(p, dmp);
        add_eq(vec![(hofs[j], dn, dm, &id_dn, &a.iota[j], 1), (gofs[j], dnp, dmp, &b.iota[j], &id_dmp, p - 1)], dn, dmp);
        if j > 0 {
            let (dm1, dmp1) = (a.iota[j - 1].rows(), a.iota[j - 1].cols());
            let (dn1, dnp1) = (b.iota[j - 1].rows(), b.iota[j - 1].cols());
            // h_{j-1} · beta^M_j = beta^N_j · h_j
            let id_dn1 = Mat::identity(p, dn1);
            let id_dm = Mat::identity(p, dm);
            add_eq(vec![(hofs[j - 1], dn1, dm1, &id_dn1, &a.beta[j], 1), (hofs[j], dn, dm, &b.beta[j], &id_dm, p - 1)], dn1, dm);
            // g_{j-1} · alpha^M_j = alpha^N_j · g_j
            let id_dnp1 = Mat::identity(p, dnp1);
            add_eq(vec![(gofs[j - 1], dnp1, dmp1, &id_dnp1, &a.alpha[j], 1), (gofs[j], dnp, dmp, &b.alpha[j], &id_dmp, p - 1)], dnp1, dmp);
        }
    }
    let sol = if rows.is_empty() {
        Mat::identity(p, nvar)
    } else {
        let flat: Vec<u64> = rows.iter().flatten().copied().collect();
        Mat::from_vec(p, rows.len(), nvar, flat).nullspace()
    };
    // Assemble block-diagonal morphisms of the covers.
    let offm = prefix(&m.total_dims());
    let offmp = prefix(&m.sub_dims());
    let offn = prefix(&n.total_dims());
    let offnp = prefix(&n.sub_dims());
    let mut out = Vec::with_capacity(sol.cols());
    for s in 0..sol.cols() {
        let mut g = Mat::zeros(p, fn_.du(), fm.du());
        let mut h = Mat::zeros(p, fn_.dv(), fm.dv());
        for j in 0..k {
            let deg = lo + j as i64;
            let (Some(km), Some(kn)) = (m.index(deg), n.index(deg)) else { continue };
            let (dm, dmp) = (a.iota[j].rows(), a.iota[j].cols());
            let (dn, dnp) = (b.iota[j].rows(), b.iota[j].cols());
            for x in 0..dnp {
                for y in 0..dmp {
                    g.set(offnp[kn] + x, offmp[km] + y, sol.get(gofs[j] + y * dnp + x, s));
                }
            }
            for x in 0..dn {
                for y in 0..dm {
                    h.set(offn[kn] + x, offm[km] + y, sol.get(hofs[j] + y * dn + x, s));
                }
            }
        }
        out.push(Morphism::new(g, h));
    }
    Ok(out)
}

/// Both sides of the Hom-sum formula `dim Hom(FM, FN) = Σ_i dim Hom(M[i], N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomFormulaReport {
    pub left: usize,
    pub right: usize,
}

impl HomFormulaReport {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

/// Computes both sides of the Hom-sum formula; the sum runs over the
/// shifts whose windows overlap.
pub fn hom_formula_check(m: &GradedRep, n: &GradedRep) -> Result<HomFormulaReport, RepError> {
    let left = hom_dim(&m.cover(), &n.cover())?;
    let mut right = 0;
    if !m.is_empty() && !n.is_empty() {
        for i in (n.lo - m.hi())..=(n.hi() - m.lo) {
            right += graded_hom(&m.shift(i), n)?.len();
        }
    }
    Ok(HomFormulaReport { left, right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ar::same_indecomposable;
    use crate::rng::seeded;

    fn shape(p: u64, m: usize, n: usize) -> Shape {
        Shape::new(p, m, n).unwrap()
    }

    /// Counts degree-0 morphisms by enumerating all tuples of matrices.
    fn brute_force_graded_hom(m: &GradedRep, n: &GradedRep) -> u64 {
        let fm = m.cover();
        let fnn = n.cover();
        let p = m.shape.p;
        // Positions of the block-diagonal entries allowed by the grading.
        let mut g_slots = Vec::new();
        let mut h_slots = Vec::new();
        let (offm, offmp, offn, offnp) = (prefix(&m.total_dims()), prefix(&m.sub_dims()), prefix(&n.total_dims()), prefix(&n.sub_dims()));
        for deg in m.lo.max(n.lo)..=m.hi().min(n.hi()) {
            let km = m.index(deg).unwrap();
            let kn = n.index(deg).unwrap();
            for x in 0..n.iota[kn].cols() {
                for y in 0..m.iota[km].cols() {
                    g_slots.push((offnp[kn] + x, offmp[km] + y));
                }
            }
            for x in 0..n.iota[kn].rows() {
                for y in 0..m.iota[km].rows() {
                    h_slots.push((offn[kn] + x, offm[km] + y));
                }
            }
        }
        let total = g_slots.len() + h_slots.len();
        assert!(total <= 16);
        let mut count = 0;
        for code in 0..p.pow(total as u32) {
            let mut c = code;
            let mut g = Mat::zeros(p, fnn.du(), fm.du());
            let mut h = Mat::zeros(p, fnn.dv(), fm.dv());
            for &(i, j) in &g_slots {
                g.set(i, j, c % p);
                c /= p;
            }
            for &(i, j) in &h_slots {
                h.set(i, j, c % p);
                c /= p;
            }
            if fm.check_morphism(&fnn, &Morphism::new(g, h)).is_ok() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn covers_of_standard_graded_objects() {
        let s = shape(3, 2, 4);
        for i in [-2, 0, 3] {
            for k in [StandardKind::P, StandardKind::I, StandardKind::Y] {
                let g = GradedRep::standard(k, s, i);
                assert!(same_indecomposable(&g.cover(), &RepObject::standard(k, s)), "{k:?}[{i}]");
            }
        }
        let y = GradedRep::from_box_diagram(&BoxDiagram::from_triples(&[4], &[]), &[0], s).unwrap();
        assert_eq!(y.total_dims(), vec![1, 1, 1, 1]);
        assert_eq!(y.cover().jordan_type_v(), vec![4]);
    }

    #[test]
    fn shift_laws() {
        let mut rng = seeded(21);
        let s = shape(2, 2, 4);
        for _ in 0..20 {
            let g = GradedRep::random(&mut rng, s, 3, 2, 3);
            assert_eq!(g.shift(0), g);
            assert_eq!(g.shift(2).shift(-5), g.shift(-3));
            assert_eq!(g.shift(1).cover(), g.cover());
            let far = g.shift(g.len() as i64 + 1);
            assert!(graded_hom(&g, &far).unwrap().is_empty());
            assert_eq!(g.shift(7).normalize(), g.normalize());
        }
    }

    #[test]
    fn identity_is_a_graded_endomorphism() {
        let mut rng = seeded(22);
        let s = shape(3, 2, 5);
        for _ in 0..10 {
            let g = GradedRep::random(&mut rng, s, 3, 2, 3);
            let basis = graded_hom(&g, &g).unwrap();
            let x = g.cover();
            let len = x.du() * x.du() + x.dv() * x.dv();
            let mut e = Echelon::new(3, len);
            for b in &basis {
                assert!(x.check_morphism(&x, b).is_ok());
                e.insert(b.to_vec());
            }
            assert!(e.contains(&Morphism::identity(&x).to_vec()));
        }
    }

    #[test]
    fn graded_hom_matches_brute_force() {
        let mut rng = seeded(23);
        let s = shape(2, 2, 3);
        let mut checked = 0;
        for _ in 0..200 {
            let a = GradedRep::random(&mut rng, s, 2, 1, 2);
            let b = GradedRep::random(&mut rng, s, 2, 1, 2);
            let (x, y) = (a.cover(), b.cover());
            if x.du() + x.dv() + y.du() + y.dv() > 6 {
                continue;
            }
            let dim = graded_hom(&a, &b).unwrap().len() as u32;
            assert_eq!(brute_force_graded_hom(&a, &b), 2u64.pow(dim));
            checked += 1;
        }
        assert!(checked > 20);
    }

    #[test]
    fn hom_formula_on_standard_and_random_pairs() {
        let s = shape(3, 3, 5);
        let p0 = GradedRep::standard(StandardKind::P, s, 0);
        let r = hom_formula_check(&p0, &p0).unwrap();
        assert_eq!(r, HomFormulaReport { left: 3, right: 3 });
        let mut rng = seeded(24);
        for (p, m, n) in [(2, 2, 4), (3, 2, 4), (2, 3, 5), (3, 1, 3)] {
            let s = shape(p, m, n);
            for _ in 0..50 {
                let a = GradedRep::random(&mut rng, s, 3, 2, 3);
                let b = GradedRep::random(&mut rng, s, 3, 2, 3);
                let r = hom_formula_check(&a, &b).unwrap();
                assert!(r.holds(), "{r:?}");
            }
        }
        // Degenerate case m = n = 1: a column of Y against a full P column.
        let s = shape(2, 1, 1);
        let y = GradedRep::standard(StandardKind::Y, s, 0);
        let pp = GradedRep::standard(StandardKind::P, s, 0);
        assert!(hom_formula_check(&y, &pp).unwrap().holds());
    }

    #[test]
    fn cover_is_additive() {
        let mut rng = seeded(25);
        let s = shape(2, 2, 4);
        for _ in 0..10 {
            let a = GradedRep::random(&mut rng, s, 2, 2, 3);
            let b = GradedRep::random(&mut rng, s, 2, 2, 3).shift(-1);
            let sum = a.direct_sum(&b).unwrap();
            assert!(sum.validate().is_ok());
            let lhs = sum.cover();
            let rhs = a.cover().direct_sum(&b.cover()).unwrap();
            assert_eq!(crate::hom::fingerprint(&lhs), crate::hom::fingerprint(&rhs));
            assert_eq!(hom_dim(&lhs, &rhs).unwrap(), hom_dim(&rhs, &rhs).unwrap());
        }
    }

    #[test]
    fn inhomogeneous_generators_are_rejected() {
        let s = shape(2, 2, 4);
        let d = BoxDiagram::from_triples(&[4, 2], &[&[(1, 2, 1), (2, 0, 1)]]);
        assert!(GradedRep::from_box_diagram(&d, &[0, 0], s).is_err());
        assert!(GradedRep::from_box_diagram(&d, &[0, -2], s).is_ok());
    }
}
