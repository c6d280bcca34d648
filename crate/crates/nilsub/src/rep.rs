//! Objects of the ambient category `H_m(k[T]/T^n)` and of its full subcategory
//! `S_m(k[T]/T^n)` of invariant subspaces.
//!
//! An object is a pair of `F_p`-spaces `U`, `V` with nilpotent operators
//! `alpha` on `U` and `beta` on `V` and a linear map `iota: U -> V` satisfying
//! `beta·iota = iota·alpha`, `alpha^m = 0` and `beta^n = 0`. The object lies in
//! `S_m` when `iota` is injective.

use std::fmt;

use rand::Rng as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{check_prime, Echelon, LinalgError, Mat};
use crate::rng::Rng;

/// Errors raised while building or combining objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("term {term:?} of generator {generator} is out of range: {reason}")]
    TermOutOfRange { generator: usize, term: Term, reason: String },
    #[error("generator {0} is not killed by T^m")]
    NotBounded(usize),
    #[error("objects live in different categories: {0}")]
    Mismatch(String),
    #[error("invalid object: {0}")]
    Invalid(String),
    #[error("not a morphism: {0}")]
    NotMorphism(String),
}

/// The shape parameters shared by all objects of one category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub p: u64,
    pub m: usize,
    pub n: usize,
}

impl Shape {
    pub fn new(p: u64, m: usize, n: usize) -> Result<Self, RepError> {
        check_prime(p)?;
        if m == 0 || n == 0 || m > n {
            return Err(RepError::Parameters(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
        }
        Ok(Self { p, m, n })
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{}(k[T]/T^{}) over F_{}", self.m, self.n, self.p)
    }
}

/// Subspace and total dimensions of an object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DimPair {
    pub du: usize,
    pub dv: usize,
}

impl DimPair {
    pub fn add(self, o: DimPair) -> DimPair {
        DimPair { du: self.du + o.du, dv: self.dv + o.dv }
    }
}

impl fmt::Display for DimPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.du, self.dv)
    }
}

/// One term `coeff·T^exp·x_col` of a box-diagram generator; `col` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub col: usize,
    pub exp: usize,
    pub coeff: i64,
}

impl Term {
    pub fn new(col: usize, exp: usize, coeff: i64) -> Self {
        Self { col, exp, coeff }
    }
}

/// A box diagram: column heights of `V = ⊕ k[T]/T^{λ_c}` and generators of `U`.
///
/// Columns may be listed in any order; generator terms refer to them by
/// 1-based position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxDiagram {
    pub columns: Vec<usize>,
    pub generators: Vec<Vec<Term>>,
}

impl BoxDiagram {
    pub fn new(columns: Vec<usize>, generators: Vec<Vec<Term>>) -> Self {
        Self { columns, generators }
    }

    /// Builds a diagram from `(col, exp, coeff)` triples.
    pub fn from_triples(columns: &[usize], generators: &[&[(usize, usize, i64)]]) -> Self {
        let gens = generators.iter().map(|g| g.iter().map(|&(c, e, a)| Term::new(c, e, a)).collect()).collect();
        Self { columns: columns.to_vec(), generators: gens }
    }

    /// Offset of the first basis vector of each column in `V`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.columns.len());
        let mut acc = 0;
        for &h in &self.columns {
            off.push(acc);
            acc += h;
        }
        off
    }
}

/// The three standard objects `P`, `I`, `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StandardKind {
    /// `(k[T]/T^m = k[T]/T^m)`.
    P,
    /// `(soc^m Λ ⊆ Λ)`.
    I,
    /// `(0 ⊆ Λ)`.
    Y,
}

/// An object of `H_m(k[T]/T^n)` over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RepObject {
    pub shape: Shape,
    alpha: Mat,
    beta: Mat,
    iota: Mat,
}

impl fmt::Debug for RepObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RepObject({}, dims {}, alpha {:?}, beta {:?}, iota {:?})", self.shape, self.dims(), self.alpha, self.beta, self.iota)
    }
}

/// A morphism of objects, given by its subspace part `g` and total part `h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub g: Mat,
    pub h: Mat,
}

impl Morphism {
    pub fn new(g: Mat, h: Mat) -> Self {
        Self { g, h }
    }

    pub fn identity(x: &RepObject) -> Self {
        Self { g: Mat::identity(x.p(), x.du()), h: Mat::identity(x.p(), x.dv()) }
    }

    pub fn zero(src: &RepObject, tgt: &RepObject) -> Self {
        Self { g: Mat::zeros(src.p(), tgt.du(), src.du()), h: Mat::zeros(src.p(), tgt.dv(), src.dv()) }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        Morphism { g: self.g.mul(&other.g), h: self.h.mul(&other.h) }
    }

    pub fn add(&self, o: &Morphism) -> Morphism {
        Morphism { g: self.g.add(&o.g), h: self.h.add(&o.h) }
    }

    pub fn scale(&self, c: u64) -> Morphism {
        Morphism { g: self.g.scale(c), h: self.h.scale(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.g.is_zero() && self.h.is_zero()
    }

    /// Both components invertible.
    pub fn is_iso(&self) -> bool {
        self.g.is_invertible() && self.h.is_invertible()
    }

    /// Stacked coordinates `(vec g, vec h)`.
    pub fn to_vec(&self) -> Vec<u64> {
        let mut v = self.g.vec_cols();
        v.extend(self.h.vec_cols());
        v
    }

    /// Inverse of [`Morphism::to_vec`] for the given shapes.
    pub fn from_vec(p: u64, src: DimPair, tgt: DimPair, v: &[u64]) -> Morphism {
        let ng = src.du * tgt.du;
        let mut g = Mat::zeros(p, tgt.du, src.du);
        for j in 0..src.du {
            for i in 0..tgt.du {
                g.set(i, j, v[j * tgt.du + i]);
            }
        }
        let mut h = Mat::zeros(p, tgt.dv, src.dv);
        for j in 0..src.dv {
            for i in 0..tgt.dv {
                h.set(i, j, v[ng + j * tgt.dv + i]);
            }
        }
        Morphism { g, h }
    }

    /// The block matrix `diag(g, h)` acting on `U ⊕ V`.
    pub fn block(&self) -> Mat {
        self.g.block_diag(&self.h)
    }
}

/// A violated invariant reported by [`RepObject::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub violations: Vec<String>,
    pub in_s: bool,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A subobject given by bases of its two parts together with its own structure.
#[derive(Clone, Debug)]
pub struct SubObject {
    /// Basis of the subspace part, as columns in `U`.
    pub u_basis: Mat,
    /// Basis of the total part, as columns in `V`.
    pub v_basis: Mat,
    /// The induced object.
    pub object: RepObject,
}

impl RepObject {
    /// Builds an object from its three matrices, checking every invariant.
    pub fn new(shape: Shape, alpha: Mat, beta: Mat, iota: Mat) -> Result<Self, RepError> {
        let x = Self::from_parts_unchecked(shape, alpha, beta, iota);
        let d = x.validate();
        if d.is_valid() {
            Ok(x)
        } else {
            Err(RepError::Invalid(d.violations.join("; ")))
        }
    }

    /// Builds an object without checking the relations (shapes must agree).
    pub fn from_parts_unchecked(shape: Shape, alpha: Mat, beta: Mat, iota: Mat) -> Self {
        assert!(alpha.is_square() && beta.is_square(), "operators must be square");
        assert!(iota.rows() == beta.rows() && iota.cols() == alpha.rows(), "iota has the wrong shape");
        Self { shape, alpha, beta, iota }
    }

    pub fn zero(shape: Shape) -> Self {
        let p = shape.p;
        Self::from_parts_unchecked(shape, Mat::zeros(p, 0, 0), Mat::zeros(p, 0, 0), Mat::zeros(p, 0, 0))
    }

    pub fn p(&self) -> u64 {
        self.shape.p
    }

    pub fn m(&self) -> usize {
        self.shape.m
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn du(&self) -> usize {
        self.alpha.rows()
    }

    pub fn dv(&self) -> usize {
        self.beta.rows()
    }

    pub fn dims(&self) -> DimPair {
        DimPair { du: self.du(), dv: self.dv() }
    }

    pub fn is_zero(&self) -> bool {
        self.du() == 0 && self.dv() == 0
    }

    pub fn alpha(&self) -> &Mat {
        &self.alpha
    }

    pub fn beta(&self) -> &Mat {
        &self.beta
    }

    pub fn iota(&self) -> &Mat {
        &self.iota
    }

    /// Whether `iota` is injective, so that the object lies in `S_m`.
    pub fn in_s(&self) -> bool {
        self.iota.rank() == self.du()
    }

    /// Reports every violated invariant.
    pub fn validate(&self) -> Diagnostics {
        let mut v = Vec::new();
        let p = self.p();
        for (name, m) in [("alpha", &self.alpha), ("beta", &self.beta), ("iota", &self.iota)] {
            if m.modulus() != p {
                v.push(format!("{name} has modulus {} instead of {p}", m.modulus()));
            }
        }
        if v.is_empty() {
            if self.beta.mul(&self.iota) != self.iota.mul(&self.alpha) {
                v.push("beta·iota differs from iota·alpha".to_string());
            }
            if !self.alpha.pow(self.m() as u64).is_zero() {
                v.push(format!("alpha^{} is not zero", self.m()));
            }
            if !self.beta.pow(self.n() as u64).is_zero() {
                v.push(format!("beta^{} is not zero", self.n()));
            }
        }
        let in_s = v.is_empty() && self.in_s();
        Diagnostics { violations: v, in_s }
    }

    /// The standard objects `P`, `I` and `Y`.
    pub fn standard(kind: StandardKind, shape: Shape) -> Self {
        let (m, n) = (shape.m, shape.n);
        match kind {
            StandardKind::P => {
                let j = jordan_block(shape.p, m);
                Self::from_parts_unchecked(shape, j.clone(), j, Mat::identity(shape.p, m))
            }
            StandardKind::I => {
                let mut iota = Mat::zeros(shape.p, n, m);
                for i in 0..m {
                    iota.set(n - m + i, i, 1);
                }
                Self::from_parts_unchecked(shape, jordan_block(shape.p, m), jordan_block(shape.p, n), iota)
            }
            StandardKind::Y => Self::from_parts_unchecked(shape, Mat::zeros(shape.p, 0, 0), jordan_block(shape.p, n), Mat::zeros(shape.p, n, 0)),
        }
    }

    /// Builds the object pictured by a box diagram.
    ///
    /// `V` has basis `T^e x_c` ordered column by column, `beta` is
    /// multiplication by `T`, and `U` is the `T`-closure of the generators.
    pub fn from_box_diagram(d: &BoxDiagram, shape: Shape) -> Result<Self, RepError> {
        let p = shape.p;
        for &h in &d.columns {
            if h == 0 || h > shape.n {
                return Err(RepError::Parameters(format!("column height {h} outside 1..={}", shape.n)));
            }
        }
        let off = d.offsets();
        let dv: usize = d.columns.iter().sum();
        let mut beta = Mat::zeros(p, dv, dv);
        for (c, &h) in d.columns.iter().enumerate() {
            for e in 0..h.saturating_sub(1) {
                beta.set(off[c] + e + 1, off[c] + e, 1);
            }
        }
        let mut gens = Vec::new();
        for (gi, g) in d.generators.iter().enumerate() {
            let mut v = vec![0u64; dv];
            for t in g {
                if t.col == 0 || t.col > d.columns.len() {
                    return Err(RepError::TermOutOfRange { generator: gi + 1, term: *t, reason: format!("column index must lie in 1..={}", d.columns.len()) });
                }
                let h = d.columns[t.col - 1];
                if t.exp >= h {
                    return Err(RepError::TermOutOfRange { generator: gi + 1, term: *t, reason: format!("exponent must be below the column height {h}") });
                }
                let idx = off[t.col - 1] + t.exp;
                v[idx] = (v[idx] + crate::linalg::reduce_i64(t.coeff, p)) % p;
            }
            gens.push(v);
        }
        let betam = beta.pow(shape.m as u64);
        for (gi, g) in gens.iter().enumerate() {
            if betam.mul_vec(g).iter().any(|&x| x != 0) {
                return Err(RepError::NotBounded(gi + 1));
            }
        }
        let u = closure(&beta, &gens);
        Ok(Self::subspace_object(shape, beta, u))
    }

    /// The object `(U ⊆ V)` for a `beta`-invariant subspace with basis columns `u`.
    pub fn subspace_object(shape: Shape, beta: Mat, u: Mat) -> Self {
        let alpha = solve_exact(&u, &beta.mul(&u));
        Self::from_parts_unchecked(shape, alpha, beta, u)
    }

    /// Block direct sum.
    pub fn direct_sum(&self, o: &RepObject) -> Result<RepObject, RepError> {
        if self.shape != o.shape {
            return Err(RepError::Mismatch(format!("{} vs {}", self.shape, o.shape)));
        }
        Ok(Self::from_parts_unchecked(self.shape, self.alpha.block_diag(&o.alpha), self.beta.block_diag(&o.beta), self.iota.block_diag(&o.iota)))
    }

    /// Direct sum of a list of objects of the given shape.
    pub fn sum_all(shape: Shape, xs: &[RepObject]) -> Result<RepObject, RepError> {
        let mut acc = RepObject::zero(shape);
        for x in xs {
            acc = acc.direct_sum(x)?;
        }
        Ok(acc)
    }

    /// Reinterprets the object in a category with a different bound `m`.
    pub fn with_shape(&self, shape: Shape) -> Result<RepObject, RepError> {
        let x = Self::from_parts_unchecked(shape, self.alpha.clone(), self.beta.clone(), self.iota.clone());
        let d = x.validate();
        if d.is_valid() {
            Ok(x)
        } else {
            Err(RepError::Invalid(d.violations.join("; ")))
        }
    }

    /// Transports the structure along invertible changes of basis
    /// `a` on `U` and `b` on `V`: the result is isomorphic via `(a, b)`.
    pub fn conjugate(&self, a: &Mat, b: &Mat) -> RepObject {
        let ai = a.inverse().expect("invertible change of basis");
        let bi = b.inverse().expect("invertible change of basis");
        Self::from_parts_unchecked(self.shape, a.mul(&self.alpha).mul(&ai), b.mul(&self.beta).mul(&bi), b.mul(&self.iota).mul(&ai))
    }

    /// Checks that `f` is a morphism `self -> tgt`.
    pub fn check_morphism(&self, tgt: &RepObject, f: &Morphism) -> Result<(), RepError> {
        if f.g.rows() != tgt.du() || f.g.cols() != self.du() || f.h.rows() != tgt.dv() || f.h.cols() != self.dv() {
            return Err(RepError::NotMorphism("component shapes do not match the objects".into()));
        }
        if f.h.mul(&self.iota) != tgt.iota.mul(&f.g) {
            return Err(RepError::NotMorphism("h·iota differs from iota·g".into()));
        }
        if f.g.mul(&self.alpha) != tgt.alpha.mul(&f.g) {
            return Err(RepError::NotMorphism("g does not commute with alpha".into()));
        }
        if f.h.mul(&self.beta) != tgt.beta.mul(&f.h) {
            return Err(RepError::NotMorphism("h does not commute with beta".into()));
        }
        Ok(())
    }

    /// The subobject with the given invariant subspaces (bases as columns).
    pub fn subobject(&self, u_basis: &Mat, v_basis: &Mat) -> SubObject {
        let alpha = solve_exact(u_basis, &self.alpha.mul(u_basis));
        let beta = solve_exact(v_basis, &self.beta.mul(v_basis));
        let iota = solve_exact(v_basis, &self.iota.mul(u_basis));
        SubObject { u_basis: u_basis.clone(), v_basis: v_basis.clone(), object: Self::from_parts_unchecked(self.shape, alpha, beta, iota) }
    }

    /// The quotient by invariant subspaces, with the projection morphism.
    pub fn quotient(&self, u_sub: &Mat, v_sub: &Mat) -> (RepObject, Morphism) {
        let (qu, pu) = quotient_map(u_sub, self.du(), self.p());
        let (qv, pv) = quotient_map(v_sub, self.dv(), self.p());
        // Induced maps: pick the complement lift for each quotient basis vector.
        let alpha = pu.mul(&self.alpha).mul(&qu);
        let beta = pv.mul(&self.beta).mul(&qv);
        let iota = pv.mul(&self.iota).mul(&qu);
        (Self::from_parts_unchecked(self.shape, alpha, beta, iota), Morphism::new(pu, pv))
    }

    /// `rad^k`: the image of `beta^k`, with the induced subobject `(iota^{-1}(W) ⊆ W)`.
    pub fn radical_power(&self, k: usize) -> SubObject {
        let w = self.beta.pow(k as u64).column_space();
        self.induced_on(&w)
    }

    /// `soc^k`: the kernel of `beta^k`, with the induced subobject.
    pub fn socle_power(&self, k: usize) -> SubObject {
        let w = self.beta.pow(k as u64).nullspace();
        self.induced_on(&w)
    }

    /// The largest subobject whose total part is the invariant subspace `w`.
    pub fn induced_on(&self, w: &Mat) -> SubObject {
        let p = self.p();
        // iota^{-1}(w): kernel of the composite U -> V -> V/w.
        let u = if w.cols() == 0 {
            self.iota.nullspace()
        } else {
            let (_, proj) = quotient_map(w, self.dv(), p);
            proj.mul(&self.iota).nullspace()
        };
        self.subobject(&u, w)
    }

    /// Kernel of a morphism `self -> tgt`, with its inclusion.
    pub fn kernel(&self, tgt: &RepObject, f: &Morphism) -> Result<(RepObject, Morphism), RepError> {
        self.check_morphism(tgt, f)?;
        let s = self.subobject(&f.g.nullspace(), &f.h.nullspace());
        Ok((s.object, Morphism::new(s.u_basis, s.v_basis)))
    }

    /// Image of a morphism `self -> tgt`, as a subobject of `tgt` with its inclusion.
    pub fn image(&self, tgt: &RepObject, f: &Morphism) -> Result<(RepObject, Morphism), RepError> {
        self.check_morphism(tgt, f)?;
        let s = tgt.subobject(&f.g.column_space(), &f.h.column_space());
        Ok((s.object, Morphism::new(s.u_basis, s.v_basis)))
    }

    /// Cokernel of a morphism `self -> tgt`, with the projection from `tgt`.
    pub fn cokernel(&self, tgt: &RepObject, f: &Morphism) -> Result<(RepObject, Morphism), RepError> {
        self.check_morphism(tgt, f)?;
        Ok(tgt.quotient(&f.g.column_space(), &f.h.column_space()))
    }

    /// Column partition of `beta` (Jordan type), sorted decreasingly.
    pub fn jordan_type_v(&self) -> Vec<usize> {
        jordan_type(&self.beta)
    }

    /// Column partition of `alpha`, sorted decreasingly.
    pub fn jordan_type_u(&self) -> Vec<usize> {
        jordan_type(&self.alpha)
    }

    /// A seeded random object of `S_m` built from a random box diagram.
    ///
    /// The number of columns follows a truncated geometric law, heights are
    /// uniform in `1..=n`, and each generator is a sparse random element of
    /// `soc^m V`.
    pub fn random(rng: &mut Rng, shape: Shape, max_columns: usize, max_generators: usize) -> RepObject {
        let d = random_box_diagram(rng, shape, max_columns, max_generators);
        Self::from_box_diagram(&d, shape).expect("random diagrams are valid")
    }

    /// A seeded random object whose generators are dense in `soc^m V`.
    pub fn random_dense(rng: &mut Rng, shape: Shape, max_columns: usize, max_generators: usize) -> RepObject {
        let d = random_dense_diagram(rng, shape, max_columns, max_generators);
        Self::from_box_diagram(&d, shape).expect("random diagrams are valid")
    }
}

/// A random box diagram whose generators lie in `soc^m V`.
pub fn random_box_diagram(rng: &mut Rng, shape: Shape, max_columns: usize, max_generators: usize) -> BoxDiagram {
    let mut s = 1;
    while s < max_columns.max(1) && rng.gen_bool(0.55) {
        s += 1;
    }
    let columns: Vec<usize> = (0..s).map(|_| rng.gen_range(1..=shape.n)).collect();
    let ng = if max_generators == 0 { 0 } else { rng.gen_range(0..=max_generators) };
    let mut generators = Vec::new();
    for _ in 0..ng {
        let mut g = Vec::new();
        for (c, &h) in columns.iter().enumerate() {
            if g.is_empty() || rng.gen_bool(0.6) {
                let lo = h.saturating_sub(shape.m);
                let e = rng.gen_range(lo..h);
                let coeff = rng.gen_range(1..shape.p) as i64;
                g.push(Term::new(c + 1, e, coeff));
            }
        }
        // Drop some terms so that generators are not all full-length.
        if g.len() > 1 && rng.gen_bool(0.3) {
            let k = rng.gen_range(0..g.len());
            g.remove(k);
        }
        generators.push(g);
    }
    BoxDiagram { columns, generators }
}

/// A random box diagram whose generators are dense random vectors of
/// `soc^k V` for random levels `k <= m`, so that the subspace tends to be in
/// general position for its Jordan type.
pub fn random_dense_diagram(rng: &mut Rng, shape: Shape, max_columns: usize, max_generators: usize) -> BoxDiagram {
    let mut s = 1;
    while s < max_columns.max(1) && rng.gen_bool(0.6) {
        s += 1;
    }
    let columns: Vec<usize> = (0..s).map(|_| rng.gen_range(1..=shape.n)).collect();
    let ng = if max_generators == 0 { 0 } else { rng.gen_range(1..=max_generators) };
    let mut generators = Vec::new();
    for _ in 0..ng {
        let level = rng.gen_range(1..=shape.m);
        let mut g = Vec::new();
        for (c, &h) in columns.iter().enumerate() {
            for e in h.saturating_sub(level)..h {
                let coeff = rng.gen_range(0..shape.p) as i64;
                if coeff != 0 {
                    g.push(Term::new(c + 1, e, coeff));
                }
            }
        }
        if !g.is_empty() {
            generators.push(g);
        }
    }
    BoxDiagram { columns, generators }
}

/// Linear equations in the entries of unknown matrix blocks, each equation
/// block being a sum of terms `L·X·R`.
struct BlockSystem {
    p: u64,
    nvar: usize,
    rows: Vec<Vec<u64>>,
}

impl BlockSystem {
    /// Adds the equations `Σ L_t·X_t·R_t = 0`, where term `t` names the
    /// unknown block by `(offset, rows, cols)`.
    fn add(&mut self, terms: &[(usize, usize, usize, &Mat, &Mat)], out_rows: usize, out_cols: usize) {
        let p = self.p;
        for oi in 0..out_rows {
            for oj in 0..out_cols {
                let mut row = vec![0u64; self.nvar];
                for &(off, r, c, l, rt) in terms {
                    for x in 0..r {
                        let lv = l.get(oi, x);
                        if lv == 0 {
                            continue;
                        }
                        for y in 0..c {
                            let rv = rt.get(y, oj);
                            if rv != 0 {
                                let v = &mut row[off + y * r + x];
                                *v = (*v + lv * rv) % p;
                            }
                        }
                    }
                }
                if row.iter().any(|&v| v != 0) {
                    self.rows.push(row);
                }
            }
        }
    }

    fn solutions(&self) -> Mat {
        if self.rows.is_empty() {
            return Mat::identity(self.p, self.nvar);
        }
        let flat: Vec<u64> = self.rows.iter().flatten().copied().collect();
        Mat::from_vec(self.p, self.rows.len(), self.nvar, flat).nullspace()
    }
}

fn block_from(p: u64, sol: &[u64], off: usize, r: usize, c: usize) -> Mat {
    let mut m = Mat::zeros(p, r, c);
    for x in 0..r {
        for y in 0..c {
            m.set(x, y, sol[off + y * r + x]);
        }
    }
    m
}

/// Extensions `0 -> b -> E -> a -> 0` in `H_m` whose maps are block upper
/// triangular, with diagonal blocks from `b` and `a`. A cocycle is the
/// vector of off-diagonal blocks `x` (for `alpha`), `y` (for `beta`) and
/// `z` (for `iota`), each stored column-major, satisfying commutativity and
/// the nilpotency bounds. When `a` and `b` lie in `S_m`, so does `E`.
#[derive(Clone, Debug)]
pub struct ExtensionSpace {
    pub a: RepObject,
    pub b: RepObject,
    /// Basis of the cocycles, as columns.
    pub cocycles: Mat,
}

impl ExtensionSpace {
    pub fn new(a: &RepObject, b: &RepObject) -> Result<Self, RepError> {
        if a.shape != b.shape {
            return Err(RepError::Mismatch(format!("{} vs {}", a.shape, b.shape)));
        }
        let shape = a.shape;
        let p = shape.p;
        let (ua, va, ub, vb) = (a.du(), a.dv(), b.du(), b.dv());
        let mut sp = Self { a: a.clone(), b: b.clone(), cocycles: Mat::zeros(p, 0, 0) };
        let (ox, oy, oz) = sp.offsets();
        let mut sys = BlockSystem { p, nvar: sp.nvar(), rows: Vec::new() };
        let (id_ua, id_vb) = (Mat::identity(p, ua), Mat::identity(p, vb));
        // beta_B·z + y·iota_A - iota_B·x - z·alpha_A = 0
        let (n_iota_b, n_alpha_a) = (b.iota().neg(), a.alpha().neg());
        sys.add(&[(oz, vb, ua, b.beta(), &id_ua), (oy, vb, va, &id_vb, a.iota()), (ox, ub, ua, &n_iota_b, &id_ua), (oz, vb, ua, &id_vb, &n_alpha_a)], vb, ua);
        // Upper-right block of beta_E^n and alpha_E^m.
        let pows = |m: &Mat, k: usize| -> Vec<Mat> {
            let mut out = vec![Mat::identity(p, m.rows())];
            for i in 1..k {
                out.push(out[i - 1].mul(m));
            }
            out
        };
        let (n, m) = (shape.n, shape.m);
        let (bb, ba) = (pows(b.beta(), n), pows(a.beta(), n));
        let terms: Vec<(usize, usize, usize, &Mat, &Mat)> = (0..n).map(|k| (oy, vb, va, &bb[k], &ba[n - 1 - k])).collect();
        sys.add(&terms, vb, va);
        let (ab, aa) = (pows(b.alpha(), m), pows(a.alpha(), m));
        let terms: Vec<(usize, usize, usize, &Mat, &Mat)> = (0..m).map(|k| (ox, ub, ua, &ab[k], &aa[m - 1 - k])).collect();
        sys.add(&terms, ub, ua);
        sp.cocycles = sys.solutions();
        Ok(sp)
    }

    fn offsets(&self) -> (usize, usize, usize) {
        let (ua, va, ub, vb) = (self.a.du(), self.a.dv(), self.b.du(), self.b.dv());
        (0, ub * ua, ub * ua + vb * va)
    }

    /// Length of a cocycle vector.
    pub fn nvar(&self) -> usize {
        let (ua, vb) = (self.a.du(), self.b.dv());
        self.offsets().2 + vb * ua
    }

    fn blocks(&self, v: &[u64]) -> (Mat, Mat, Mat) {
        let p = self.a.p();
        let (ua, va, ub, vb) = (self.a.du(), self.a.dv(), self.b.du(), self.b.dv());
        let (ox, oy, oz) = self.offsets();
        (block_from(p, v, ox, ub, ua), block_from(p, v, oy, vb, va), block_from(p, v, oz, vb, ua))
    }

    fn flatten(&self, x: &Mat, y: &Mat, z: &Mat) -> Vec<u64> {
        let mut v = x.vec_cols();
        v.extend(y.vec_cols());
        v.extend(z.vec_cols());
        v
    }

    /// The middle term of the extension given by a cocycle.
    pub fn middle(&self, v: &[u64]) -> Result<RepObject, RepError> {
        let p = self.a.p();
        let (x, y, z) = self.blocks(v);
        let upper = |d1: &Mat, off: &Mat, d2: &Mat| -> Mat {
            let top = d1.hstack(off);
            let bottom = Mat::zeros(p, d2.rows(), d1.cols()).hstack(d2);
            top.vstack(&bottom)
        };
        RepObject::new(
            self.a.shape,
            upper(self.b.alpha(), &x, self.a.alpha()),
            upper(self.b.beta(), &y, self.a.beta()),
            upper(self.b.iota(), &z, self.a.iota()),
        )
    }

    /// Inclusion `b -> E` of the first block.
    pub fn inclusion(&self) -> Morphism {
        let p = self.a.p();
        let g = Mat::identity(p, self.b.du()).vstack(&Mat::zeros(p, self.a.du(), self.b.du()));
        let h = Mat::identity(p, self.b.dv()).vstack(&Mat::zeros(p, self.a.dv(), self.b.dv()));
        Morphism::new(g, h)
    }

    /// Projection `E -> a` onto the second block.
    pub fn projection(&self) -> Morphism {
        let p = self.a.p();
        let g = Mat::zeros(p, self.a.du(), self.b.du()).hstack(&Mat::identity(p, self.a.du()));
        let h = Mat::zeros(p, self.a.dv(), self.b.dv()).hstack(&Mat::identity(p, self.a.dv()));
        Morphism::new(g, h)
    }

    /// Cocycles of split extensions, as columns: conjugating by the unipotent
    /// change of basis with off-diagonal blocks `(c_U, c_V)` adds
    /// `(c_U·alpha_A - alpha_B·c_U, c_V·beta_A - beta_B·c_V, c_V·iota_A - iota_B·c_U)`.
    pub fn coboundaries(&self) -> Mat {
        let p = self.a.p();
        let (ua, va, ub, vb) = (self.a.du(), self.a.dv(), self.b.du(), self.b.dv());
        let mut cols = Vec::new();
        for r in 0..ub {
            for c in 0..ua {
                let cu = Mat::zeros(p, ub, ua).with(r, c, 1);
                let x = cu.mul(self.a.alpha()).sub(&self.b.alpha().mul(&cu));
                let z = self.b.iota().mul(&cu).neg();
                cols.push(self.flatten(&x, &Mat::zeros(p, vb, va), &z));
            }
        }
        for r in 0..vb {
            for c in 0..va {
                let cv = Mat::zeros(p, vb, va).with(r, c, 1);
                let y = cv.mul(self.a.beta()).sub(&self.b.beta().mul(&cv));
                let z = cv.mul(self.a.iota());
                cols.push(self.flatten(&Mat::zeros(p, ub, ua), &y, &z));
            }
        }
        Mat::from_cols(p, self.nvar(), &cols)
    }

    /// Pullback of a cocycle along an endomorphism `f` of `a`.
    pub fn pullback(&self, v: &[u64], f: &Morphism) -> Vec<u64> {
        let (x, y, z) = self.blocks(v);
        self.flatten(&x.mul(&f.g), &y.mul(&f.h), &z.mul(&f.g))
    }
}

/// A random extension `0 -> b -> E -> a -> 0` in `H_m`, given by a uniformly
/// random cocycle of [`ExtensionSpace`].
pub fn random_extension(a: &RepObject, b: &RepObject, rng: &mut Rng) -> Result<RepObject, RepError> {
    let sp = ExtensionSpace::new(a, b)?;
    let p = a.p();
    let basis = &sp.cocycles;
    let mut sol = vec![0u64; sp.nvar()];
    for j in 0..basis.cols() {
        let c = rng.gen_range(0..p);
        if c != 0 {
            for (i, v) in sol.iter_mut().enumerate() {
                *v = (*v + c * basis.get(i, j)) % p;
            }
        }
    }
    sp.middle(&sol)
}

/// Solves `a x = b` where a solution is known to exist.
pub(crate) fn solve_exact(a: &Mat, b: &Mat) -> Mat {
    if a.cols() == 0 {
        return Mat::zeros(a.modulus(), 0, b.cols());
    }
    a.solve(b).expect("shapes agree").expect("system is consistent")
}

/// Basis of the `beta`-closure of a list of vectors, in generation order.
pub fn closure(beta: &Mat, gens: &[Vec<u64>]) -> Mat {
    let p = beta.modulus();
    let n = beta.rows();
    let mut e = Echelon::new(p, n);
    let mut keep = Vec::new();
    for g in gens {
        let mut v = g.clone();
        while v.iter().any(|&x| x != 0) {
            if e.insert(v.clone()) {
                keep.push(v.clone());
            }
            v = beta.mul_vec(&v);
        }
    }
    Mat::from_cols(p, n, &keep)
}

/// A complement basis `c` of `span(sub)` in `F_p^d` and the projection
/// `F_p^d -> F_p^d / span(sub)` in the basis given by `c`.
pub(crate) fn quotient_map(sub: &Mat, d: usize, p: u64) -> (Mat, Mat) {
    let sub = sub.column_space();
    let mut e = Echelon::new(p, d);
    for c in sub.columns() {
        e.insert(c);
    }
    let mut comp = Vec::new();
    for i in 0..d {
        let mut v = vec![0; d];
        v[i] = 1;
        if e.insert(v.clone()) {
            comp.push(v);
        }
    }
    let c = Mat::from_cols(p, d, &comp);
    let full = sub.hstack(&c);
    let inv = full.inverse().expect("basis extension is invertible");
    let proj = inv.block(sub.cols(), c.cols(), 0, d);
    (c, proj)
}

/// The nilpotent Jordan block `J_n` (ones on the subdiagonal).
pub fn jordan_block(p: u64, n: usize) -> Mat {
    let mut j = Mat::zeros(p, n, n);
    for i in 0..n.saturating_sub(1) {
        j.set(i + 1, i, 1);
    }
    j
}

/// Jordan type of a nilpotent matrix, from the ranks of its powers.
pub fn jordan_type(a: &Mat) -> Vec<usize> {
    let n = a.rows();
    let mut ranks = vec![n];
    let mut pw = Mat::identity(a.modulus(), n);
    while *ranks.last().unwrap() > 0 {
        pw = pw.mul(a);
        ranks.push(pw.rank());
        if ranks.len() > n + 1 {
            panic!("matrix is not nilpotent");
        }
    }
    // Number of blocks of size >= k is rank(A^{k-1}) - rank(A^k).
    let mut parts = Vec::new();
    for k in 1..ranks.len() {
        let at_least_k = ranks[k - 1] - ranks[k];
        let at_least_k1 = if k + 1 < ranks.len() { ranks[k] - ranks[k + 1] } else { 0 };
        for _ in 0..(at_least_k - at_least_k1) {
            parts.push(k);
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}
