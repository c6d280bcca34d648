//! Krull–Schmidt decomposition, locality certificates and isomorphism tests.
//!
//! Objects are split with Fitting decompositions of endomorphisms whose
//! characteristic polynomial has at least two distinct irreducible factors.
//! A piece is reported indecomposable only with a certificate that its
//! endomorphism algebra `A` is local: either `dim A = 1`, or an explicit
//! nilpotent two-sided ideal `J` with `A/J` a field, or an exhaustive search
//! showing that `A` has no idempotents besides `0` and `1`.

use crate::hom::{fingerprint, hom_basis, hom_basis_prepared, EndAlgebra, Prepared};
use crate::linalg::{Coords, Echelon, Mat};
use crate::poly::{charpoly, minpoly, Poly};
use crate::rep::{Morphism, RepError, RepObject};
use crate::rng::Rng;
use rand::Rng as _;

/// Tuning knobs for the randomized parts of the decomposition.
#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    /// Random endomorphisms tried per piece before certification.
    pub random_tries: usize,
    /// Random elements tried when checking that a residue algebra is a field.
    pub field_tries: usize,
    /// Exhaustive idempotent search is used when `p^dim End` is at most this.
    pub exhaustive_limit: u64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self { random_tries: 12, field_tries: 40, exhaustive_limit: 1 << 12 }
    }
}

/// Outcome of a locality check on `End(x)`.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// `End(x)` is one-dimensional.
    Brick,
    /// `End(x)` is local with the given residue field degree and radical dimension.
    Local { residue_degree: usize, radical_dim: usize },
    /// An endomorphism whose Fitting decomposition is non-trivial.
    Splits(Morphism),
    /// Neither a certificate nor a splitting element was found.
    Unknown,
}

/// Status of a piece in a decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PieceStatus {
    /// Certified indecomposable with `End = k`.
    Brick,
    /// Certified indecomposable with local endomorphism algebra.
    Local,
    /// No certificate and no splitting found within the budget.
    Unresolved,
}

impl PieceStatus {
    pub fn is_certified(self) -> bool {
        self != PieceStatus::Unresolved
    }
}

/// A direct summand with its split inclusion and projection.
#[derive(Clone, Debug)]
pub struct Piece {
    pub object: RepObject,
    /// Inclusion `piece -> source`.
    pub inclusion: Morphism,
    /// Projection `source -> piece`; `projection ∘ inclusion = id`.
    pub projection: Morphism,
    pub status: PieceStatus,
    pub end_dim: usize,
    pub fingerprint: Vec<usize>,
}

/// A decomposition of an object into pieces.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub source: RepObject,
    pub pieces: Vec<Piece>,
}

impl Decomposition {
    /// Every piece carries a certificate.
    pub fn is_complete(&self) -> bool {
        self.pieces.iter().all(|p| p.status.is_certified())
    }

    /// The sum of the pieces' inclusion-projection idempotents is the identity.
    pub fn check(&self) -> bool {
        let x = &self.source;
        let mut acc = Morphism::zero(x, x);
        for (i, a) in self.pieces.iter().enumerate() {
            for (j, b) in self.pieces.iter().enumerate() {
                let c = b.projection.compose(&a.inclusion);
                let expect = if i == j { Morphism::identity(&a.object) } else { Morphism::zero(&a.object, &b.object) };
                if c != expect {
                    return false;
                }
            }
            if x.check_morphism(&a.object, &a.projection).is_err() || a.object.check_morphism(x, &a.inclusion).is_err() {
                return false;
            }
            acc = acc.add(&a.inclusion.compose(&a.projection));
        }
        acc == Morphism::identity(x)
    }

    /// Isomorphism classes of the pieces as `(representative index, multiplicity)`,
    /// sorted by fingerprint. Pieces are grouped only when an isomorphism is
    /// found, so unresolved pieces stay separate.
    pub fn classes(&self, rng: &mut Rng) -> Vec<(usize, usize)> {
        let mut reps: Vec<(usize, usize)> = Vec::new();
        for (i, piece) in self.pieces.iter().enumerate() {
            let mut found = false;
            for r in reps.iter_mut() {
                let q = &self.pieces[r.0];
                if q.fingerprint == piece.fingerprint && q.status.is_certified() && piece.status.is_certified() {
                    if local_iso(&q.object, &piece.object).is_some() {
                        r.1 += 1;
                        found = true;
                        break;
                    }
                } else if q.fingerprint == piece.fingerprint && random_iso(&q.object, &piece.object, rng, 20).is_some() {
                    r.1 += 1;
                    found = true;
                    break;
                }
            }
            if !found {
                reps.push((i, 1));
            }
        }
        reps.sort_by(|a, b| self.pieces[a.0].fingerprint.cmp(&self.pieces[b.0].fingerprint));
        reps
    }
}

/// Result of an isomorphism test.
#[derive(Clone, Debug)]
pub enum IsoResult {
    /// An isomorphism `x -> y`.
    Iso(Morphism),
    /// Not isomorphic, with the reason.
    NotIso(String),
    /// Undecided within the budget.
    Unknown,
}

impl IsoResult {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoResult::Iso(_))
    }

    pub fn is_not_iso(&self) -> bool {
        matches!(self, IsoResult::NotIso(_))
    }
}

/// Characteristic polynomial of `diag(g, h)`.
fn morphism_charpoly(f: &Morphism) -> Poly {
    charpoly(&f.g).mul(&charpoly(&f.h))
}

/// An irreducible factor of the characteristic polynomial of `f` when it has
/// at least two distinct ones.
fn splitting_factor(f: &Morphism, rng: &mut Rng) -> Option<Poly> {
    let fac = morphism_charpoly(f).factor(rng);
    if fac.len() >= 2 {
        Some(fac[0].0.clone())
    } else {
        None
    }
}

/// Spaces `(ker, im)` of `q(f)^N` on one component.
fn fitting_spaces(a: &Mat, q: &Poly) -> (Mat, Mat) {
    let n = a.rows().max(1) as u64;
    let psi = q.eval_mat(a).pow(n);
    (psi.nullspace(), psi.column_space())
}

/// Rows of the inverse of `[k | i]` split as projections onto `k` and `i`.
fn split_projections(k: &Mat, i: &Mat) -> (Mat, Mat) {
    let p = k.modulus();
    let d = k.rows();
    if d == 0 {
        return (Mat::zeros(p, 0, 0), Mat::zeros(p, 0, 0));
    }
    let inv = k.hstack(i).inverse().expect("Fitting spaces are complementary");
    let kr: Vec<usize> = (0..k.cols()).collect();
    let ir: Vec<usize> = (k.cols()..d).collect();
    (inv.select_rows(&kr), inv.select_rows(&ir))
}

type Summand = (RepObject, Morphism, Morphism);

/// Fitting decomposition of `x` along the factor `q` of the characteristic
/// polynomial of `f`. Returns `None` when one side is zero.
pub fn fitting_split(x: &RepObject, f: &Morphism, q: &Poly) -> Option<(Summand, Summand)> {
    let (ku, iu) = fitting_spaces(&f.g, q);
    let (kv, iv) = fitting_spaces(&f.h, q);
    if ku.cols() + kv.cols() == 0 || iu.cols() + iv.cols() == 0 {
        return None;
    }
    let (pku, piu) = split_projections(&ku, &iu);
    let (pkv, piv) = split_projections(&kv, &iv);
    let k = x.subobject(&ku, &kv).object;
    let i = x.subobject(&iu, &iv).object;
    Some(((k, Morphism::new(ku, kv), Morphism::new(pku, pkv)), (i, Morphism::new(iu, iv), Morphism::new(piu, piv))))
}

/// A random linear combination of morphisms.
fn random_combination(basis: &[Morphism], zero: Morphism, p: u64, rng: &mut Rng) -> Morphism {
    let mut acc = zero;
    for b in basis {
        let c = rng.gen_range(0..p);
        if c != 0 {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

/// `End(x)` with multiplication by composition and coordinates on demand.
struct Algebra {
    basis: Vec<Morphism>,
    coords: Coords,
    p: u64,
}

impl Algebra {
    fn new(x: &RepObject, basis: Vec<Morphism>) -> Self {
        let len = x.du() * x.du() + x.dv() * x.dv();
        let cols: Vec<Vec<u64>> = basis.iter().map(|m| m.to_vec()).collect();
        let coords = Coords::new(&Mat::from_cols(x.p(), len, &cols));
        Self { basis, coords, p: x.p() }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn coords(&self, f: &Morphism) -> Vec<u64> {
        self.coords.coords_unchecked(&f.to_vec())
    }

    fn element(&self, c: &[u64], zero: &Morphism) -> Morphism {
        let mut acc = zero.clone();
        for (b, &ci) in self.basis.iter().zip(c) {
            if ci != 0 {
                acc = acc.add(&b.scale(ci));
            }
        }
        acc
    }

    /// Basis (as morphisms) of the two-sided ideal generated by `gens`.
    ///
    /// `gens` must span a space containing every commutator of the algebra.
    /// Then `a∘j = j∘a + [a, j]`, so the right ideal `gens∘A` is already
    /// two-sided and no iteration is needed. A product is located by its
    /// entries at the coordinate positions, so only those are computed.
    /// Returns `None` as soon as the ideal is the whole algebra.
    fn ideal(&self, gens: Vec<Morphism>) -> Option<(Echelon, Vec<Morphism>)> {
        let d = self.dim();
        let p = self.p;
        let mut seen = Echelon::new(p, d);
        let mut spanning = Vec::new();
        for g in gens {
            if seen.insert(self.coords(&g)) {
                spanning.push(g);
            }
        }
        let (du, dv) = self.basis.first().map_or((0, 0), |b| (b.g.rows(), b.h.rows()));
        let positions: Vec<(bool, usize, usize)> = self
            .coords
            .positions()
            .iter()
            .map(|&q| if q < du * du { (false, q % du, q / du) } else { (true, (q - du * du) % dv, (q - du * du) / dv) })
            .collect();
        let transposed: Vec<(Mat, Mat)> = self.basis.iter().map(|b| (b.g.transpose(), b.h.transpose())).collect();
        let mut products: Vec<(usize, usize)> = Vec::new();
        let mut e = Echelon::new(p, d);
        for (gi, g) in spanning.iter().enumerate() {
            for (bi, (bg, bh)) in transposed.iter().enumerate() {
                let r: Vec<u64> =
                    positions.iter().map(|&(in_v, i, j)| if in_v { dot(p, g.h.row(i), bh.row(j)) } else { dot(p, g.g.row(i), bg.row(j)) }).collect();
                if e.insert(r) {
                    products.push((gi, bi));
                    if e.rank() == d {
                        return None;
                    }
                }
            }
        }
        let mut coords = Echelon::new(p, d);
        let mut members = Vec::with_capacity(products.len());
        for (gi, bi) in products {
            let m = spanning[gi].compose(&self.basis[bi]);
            coords.insert(self.coords(&m));
            members.push(m);
        }
        Some((coords, members))
    }

    /// Whether the ideal spanned by `members` is nilpotent. Endomorphisms
    /// act faithfully on `U` and on `V`, so the ideal is nilpotent exactly
    /// when iterating it on each space reaches zero.
    fn is_nilpotent_ideal(&self, members: &[Morphism]) -> bool {
        let gs: Vec<&Mat> = members.iter().map(|f| &f.g).collect();
        let hs: Vec<&Mat> = members.iter().map(|f| &f.h).collect();
        nilpotent_on(self.p, &gs) && nilpotent_on(self.p, &hs)
    }
}

fn dot(p: u64, a: &[u64], b: &[u64]) -> u64 {
    (a.iter().zip(b).map(|(&x, &y)| x as u128 * y as u128).sum::<u128>() % p as u128) as u64
}

/// Whether the products of the square matrices `ms` vanish beyond some length.
fn nilpotent_on(p: u64, ms: &[&Mat]) -> bool {
    let Some(first) = ms.first() else {
        return true;
    };
    let n = first.rows();
    let mut space: Vec<Vec<u64>> = Mat::identity(p, n).columns();
    while !space.is_empty() {
        let mut next = Echelon::new(p, n);
        for m in ms {
            for v in &space {
                next.insert(m.mul_vec(v));
                if next.rank() == n {
                    break;
                }
            }
        }
        if next.rank() >= space.len() {
            return false;
        }
        space = next.basis_rows().to_vec();
    }
    true
}

/// `f^(p^k)` computed by repeated `p`-th powers.
fn frobenius_power(f: &Morphism, p: u64, k: usize) -> Morphism {
    let mut g = f.g.clone();
    let mut h = f.h.clone();
    for _ in 0..k {
        g = g.pow(p);
        h = h.pow(p);
    }
    Morphism::new(g, h)
}

/// Smallest multiple `k` of `r` with `p^k >= bound`.
fn frobenius_exponent(p: u64, r: usize, bound: usize) -> usize {
    let mut k: usize = 0;
    let mut q: u128 = 1;
    while q < bound as u128 {
        q *= p as u128;
        k += 1;
    }
    k.div_ceil(r).max(1) * r
}

/// Decides whether `End(x)` is local, or finds a splitting endomorphism.
pub fn certify(x: &RepObject, rng: &mut Rng, opts: &DecomposeOptions) -> Certificate {
    if x.is_zero() {
        return Certificate::Unknown;
    }
    let basis = hom_basis_prepared(x, &Prepared::new(x), x).maps;
    certify_with_basis(x, basis, rng, opts)
}

fn certify_with_basis(x: &RepObject, basis: Vec<Morphism>, rng: &mut Rng, opts: &DecomposeOptions) -> Certificate {
    analyse(x, basis, rng, opts).0
}

/// A basis of the radical of `End(x)` when `End(x)` is certified local
/// through an explicit nilpotent ideal; `None` otherwise.
pub fn end_radical(x: &RepObject, rng: &mut Rng, opts: &DecomposeOptions) -> Option<Vec<Morphism>> {
    if x.is_zero() {
        return None;
    }
    let basis = hom_basis_prepared(x, &Prepared::new(x), x).maps;
    analyse(x, basis, rng, opts).1
}

fn analyse(x: &RepObject, basis: Vec<Morphism>, rng: &mut Rng, opts: &DecomposeOptions) -> (Certificate, Option<Vec<Morphism>>) {
    let p = x.p();
    let d = basis.len();
    if d == 1 {
        return (Certificate::Brick, Some(Vec::new()));
    }
    let zero = Morphism::zero(x, x);
    let alg = Algebra::new(x, basis);
    let bound = x.du().max(x.dv()).max(1);
    // Nilpotent parts and pairwise commutators generate the candidate radical.
    let mut gens = Vec::new();
    for b in &alg.basis {
        let fac = morphism_charpoly(b).factor(rng);
        if fac.len() >= 2 {
            return (Certificate::Splits(b.clone()), None);
        }
        let r = fac[0].0.degree().unwrap_or(1).max(1);
        let s = frobenius_power(b, p, frobenius_exponent(p, r, bound));
        let nil = b.add(&s.scale(p - 1));
        if !nil.is_zero() {
            gens.push(nil);
        }
    }
    for i in 0..d {
        for j in i + 1..d {
            let (a, b) = (&alg.basis[i], &alg.basis[j]);
            let c = a.compose(b).add(&b.compose(a).scale(p - 1));
            if !c.is_zero() {
                gens.push(c);
            }
        }
    }
    if let Some((jech, members)) = alg.ideal(gens).filter(|(_, m)| alg.is_nilpotent_ideal(m)) {
        match residue_is_field(&alg, &jech, &zero, rng, opts.field_tries) {
            FieldCheck::Field(r) => {
                let radical_dim = members.len();
                return (Certificate::Local { residue_degree: r, radical_dim }, Some(members));
            }
            FieldCheck::Split(f) => return (Certificate::Splits(f), None),
            FieldCheck::Undecided => {}
        }
    }
    for _ in 0..opts.random_tries {
        let f = random_combination(&alg.basis, zero.clone(), p, rng);
        if splitting_factor(&f, rng).is_some() {
            return (Certificate::Splits(f), None);
        }
    }
    if (d as f64) * (p as f64).log2() <= (opts.exhaustive_limit as f64).log2() + 1e-9 {
        return (exhaustive_idempotents(x, alg.basis), None);
    }
    (Certificate::Unknown, None)
}

enum FieldCheck {
    Field(usize),
    Split(Morphism),
    Undecided,
}

/// Checks that the commutative reduced algebra `A/J` is a field by finding
/// an element whose minimal polynomial is irreducible of degree `dim A/J`.
fn residue_is_field(alg: &Algebra, j: &Echelon, zero: &Morphism, rng: &mut Rng, tries: usize) -> FieldCheck {
    let p = alg.p;
    let d = alg.dim();
    // Complement of J in coordinate space.
    let mut full = Echelon::new(p, d);
    for row in j.basis_rows() {
        full.insert(row.clone());
    }
    let mut comp: Vec<Vec<u64>> = Vec::new();
    for i in 0..d {
        let mut e = vec![0; d];
        e[i] = 1;
        if full.insert(e.clone()) {
            comp.push(e);
        }
    }
    let r = comp.len();
    // Coordinates modulo J with respect to the complement.
    let mut cols = j.to_cols().columns();
    cols.extend(comp.iter().cloned());
    let all = Mat::from_cols(p, d, &cols);
    let inv = all.inverse().expect("J and its complement span A");
    let jd = d - r;
    let reduce = |v: &[u64]| -> Vec<u64> { inv.mul_vec(v)[jd..].to_vec() };
    let comp_elems: Vec<Morphism> = comp.iter().map(|c| alg.element(c, zero)).collect();
    let candidates = tries.max(1);
    for t in 0..candidates {
        let a = if t < alg.basis.len() { alg.basis[t].clone() } else { random_combination(&alg.basis, zero.clone(), p, rng) };
        let cols: Vec<Vec<u64>> = comp_elems.iter().map(|c| reduce(&alg.coords(&a.compose(c)))).collect();
        let l = Mat::from_cols(p, r, &cols);
        let mp = minpoly(&l);
        let fac = mp.factor(rng);
        if fac.len() >= 2 {
            return FieldCheck::Split(a);
        }
        if mp.degree() == Some(r) && fac[0].1 == 1 {
            return FieldCheck::Field(r);
        }
    }
    FieldCheck::Undecided
}

/// Enumerates `End(x)` looking for a non-trivial idempotent.
fn exhaustive_idempotents(x: &RepObject, basis: Vec<Morphism>) -> Certificate {
    let e = EndAlgebra::from_basis(x, basis);
    let d = e.dim();
    let p = e.p();
    let mut c = vec![0u64; d];
    loop {
        if c.iter().any(|&v| v != 0) && c != e.one && e.mul(&c, &c) == c {
            return Certificate::Splits(e.element(&c));
        }
        let mut i = 0;
        loop {
            if i == d {
                return Certificate::Local { residue_degree: 0, radical_dim: 0 };
            }
            c[i] += 1;
            if c[i] == p {
                c[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// Decomposes `x` into indecomposable pieces.
pub fn decompose(x: &RepObject, rng: &mut Rng, opts: &DecomposeOptions) -> Decomposition {
    let mut done = Vec::new();
    let mut work: Vec<Summand> = Vec::new();
    if !x.is_zero() {
        work.push((x.clone(), Morphism::identity(x), Morphism::identity(x)));
    }
    while let Some((obj, inc, proj)) = work.pop() {
        let basis = hom_basis_prepared(&obj, &Prepared::new(&obj), &obj).maps;
        let end_dim = basis.len();
        let zero = Morphism::zero(&obj, &obj);
        let mut split = None;
        if end_dim > 1 {
            for _ in 0..opts.random_tries {
                let f = random_combination(&basis, zero.clone(), obj.p(), rng);
                if let Some(q) = splitting_factor(&f, rng) {
                    split = Some((f, q));
                    break;
                }
            }
        }
        let status = if split.is_some() {
            None
        } else {
            match certify_with_basis(&obj, basis, rng, opts) {
                Certificate::Brick => Some(PieceStatus::Brick),
                Certificate::Local { .. } => Some(PieceStatus::Local),
                Certificate::Unknown => Some(PieceStatus::Unresolved),
                Certificate::Splits(f) => {
                    let q = splitting_factor(&f, rng).or_else(|| idempotent_factor(&f));
                    split = q.map(|q| (f, q));
                    if split.is_none() {
                        Some(PieceStatus::Unresolved)
                    } else {
                        None
                    }
                }
            }
        };
        if let Some(status) = status {
            let fingerprint = fingerprint(&obj);
            done.push(Piece { object: obj, inclusion: inc, projection: proj, status, end_dim, fingerprint });
            continue;
        }
        let (f, q) = split.expect("split chosen");
        match fitting_split(&obj, &f, &q) {
            Some((a, b)) => {
                for (o, i, pr) in [a, b] {
                    work.push((o, inc.compose(&i), pr.compose(&proj)));
                }
            }
            None => {
                let fingerprint = fingerprint(&obj);
                done.push(Piece { object: obj, inclusion: inc, projection: proj, status: PieceStatus::Unresolved, end_dim, fingerprint });
            }
        }
    }
    done.sort_by(|a, b| a.fingerprint.cmp(&b.fingerprint));
    Decomposition { source: x.clone(), pieces: done }
}

/// For an idempotent `e`, the factor `t` of its characteristic polynomial.
fn idempotent_factor(e: &Morphism) -> Option<Poly> {
    if e.compose(e) == *e {
        Some(Poly::x(e.g.modulus().max(e.h.modulus())))
    } else {
        None
    }
}

/// Whether `x` is indecomposable: `Some(true)` with a certificate,
/// `Some(false)` when a splitting was found, `None` when undecided.
pub fn is_indecomposable(x: &RepObject, rng: &mut Rng, opts: &DecomposeOptions) -> Option<bool> {
    if x.is_zero() {
        return Some(false);
    }
    match certify(x, rng, opts) {
        Certificate::Brick | Certificate::Local { .. } => Some(true),
        Certificate::Splits(_) => Some(false),
        Certificate::Unknown => None,
    }
}

/// Searches random elements of `Hom(x, y)` for an isomorphism.
pub fn random_iso(x: &RepObject, y: &RepObject, rng: &mut Rng, tries: usize) -> Option<Morphism> {
    if x.dims() != y.dims() {
        return None;
    }
    let hb = hom_basis(x, y).ok()?;
    if hb.maps.is_empty() {
        return if x.is_zero() { Some(Morphism::zero(x, y)) } else { None };
    }
    for _ in 0..tries {
        let f = random_combination(&hb.maps, Morphism::zero(x, y), x.p(), rng);
        if f.is_iso() {
            return Some(f);
        }
    }
    None
}

/// For objects with local endomorphism algebras, `x ≅ y` iff some `g_i ∘ f_j`
/// is invertible for bases `f_j` of `Hom(x, y)` and `g_i` of `Hom(y, x)`;
/// then `f_j` is an isomorphism.
pub fn local_iso(x: &RepObject, y: &RepObject) -> Option<Morphism> {
    if x.dims() != y.dims() {
        return None;
    }
    let fs = hom_basis(x, y).ok()?.maps;
    let gs = hom_basis(y, x).ok()?.maps;
    for f in &fs {
        if f.is_iso() {
            return Some(f.clone());
        }
        for g in &gs {
            if g.compose(f).is_iso() {
                return Some(f.clone());
            }
        }
    }
    None
}

/// Tests whether `x ≅ y`, returning a witness when they are.
pub fn is_isomorphic(x: &RepObject, y: &RepObject, rng: &mut Rng, opts: &DecomposeOptions) -> Result<IsoResult, RepError> {
    if x.shape != y.shape {
        return Err(RepError::Mismatch(format!("{} vs {}", x.shape, y.shape)));
    }
    if fingerprint(x) != fingerprint(y) {
        return Ok(IsoResult::NotIso("rank invariants differ".into()));
    }
    if x.is_zero() {
        return Ok(IsoResult::Iso(Morphism::zero(x, y)));
    }
    if let Some(f) = random_iso(x, y, rng, 24) {
        return Ok(IsoResult::Iso(f));
    }
    let dx = decompose(x, rng, opts);
    let dy = decompose(y, rng, opts);
    if !dx.is_complete() || !dy.is_complete() {
        return Ok(IsoResult::Unknown);
    }
    if dx.pieces.len() != dy.pieces.len() {
        return Ok(IsoResult::NotIso("different numbers of indecomposable summands".into()));
    }
    // Match pieces greedily; indecomposables with local endomorphism rings
    // make a greedy matching exact.
    let mut used = vec![false; dy.pieces.len()];
    let mut g = Mat::zeros(x.p(), y.du(), x.du());
    let mut h = Mat::zeros(x.p(), y.dv(), x.dv());
    for a in &dx.pieces {
        let mut matched = false;
        for (j, b) in dy.pieces.iter().enumerate() {
            if used[j] || a.fingerprint != b.fingerprint {
                continue;
            }
            if let Some(phi) = local_iso(&a.object, &b.object) {
                let part = b.inclusion.compose(&phi).compose(&a.projection);
                g = g.add(&part.g);
                h = h.add(&part.h);
                used[j] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(IsoResult::NotIso("indecomposable summands differ".into()));
        }
    }
    let w = Morphism::new(g, h);
    debug_assert!(w.is_iso());
    Ok(IsoResult::Iso(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exhibits;
    use crate::hom::tests::random_invertible;
    use crate::rep::{Shape, StandardKind};
    use crate::rng::seeded;

    fn opts() -> DecomposeOptions {
        DecomposeOptions::default()
    }

    #[test]
    fn standard_objects_are_bricks_or_local() {
        let s = Shape::new(3, 2, 4).unwrap();
        let mut rng = seeded(1);
        for k in [StandardKind::P, StandardKind::I, StandardKind::Y] {
            let x = RepObject::standard(k, s);
            assert_eq!(is_indecomposable(&x, &mut rng, &opts()), Some(true), "{k:?}");
        }
    }

    #[test]
    fn direct_sums_split_into_their_summands() {
        let mut rng = seeded(2);
        for p in [2, 3, 5] {
            let s = Shape::new(p, 3, 7).unwrap();
            let a = exhibits::a_lambda(p, 1).unwrap();
            let y = RepObject::standard(StandardKind::Y, s);
            let pp = RepObject::standard(StandardKind::P, s);
            let sum = RepObject::sum_all(s, &[a.clone(), y.clone(), pp.clone(), y.clone()]).unwrap();
            // Hide the block structure.
            let bu = random_invertible(&mut rng, p, sum.du());
            let bv = random_invertible(&mut rng, p, sum.dv());
            let hidden = sum.conjugate(&bu, &bv);
            let dec = decompose(&hidden, &mut rng, &opts());
            assert!(dec.is_complete());
            assert!(dec.check());
            assert_eq!(dec.pieces.len(), 4);
            let classes = dec.classes(&mut rng);
            let mut mult: Vec<usize> = classes.iter().map(|c| c.1).collect();
            mult.sort();
            assert_eq!(mult, vec![1, 1, 2]);
        }
    }

    #[test]
    fn a_lambda_is_indecomposable() {
        let mut rng = seeded(3);
        for p in [2, 3, 5] {
            for lambda in 0..p as i64 {
                let a = exhibits::a_lambda(p, lambda).unwrap();
                assert_eq!(is_indecomposable(&a, &mut rng, &opts()), Some(true), "p={p} lambda={lambda}");
            }
        }
    }

    #[test]
    fn isomorphism_of_conjugates_and_non_isomorphism() {
        let mut rng = seeded(4);
        let p = 3;
        let a = exhibits::a_lambda(p, 1).unwrap();
        let b = exhibits::a_lambda(p, 2).unwrap();
        let bu = random_invertible(&mut rng, p, a.du());
        let bv = random_invertible(&mut rng, p, a.dv());
        let ac = a.conjugate(&bu, &bv);
        match is_isomorphic(&a, &ac, &mut rng, &opts()).unwrap() {
            IsoResult::Iso(f) => {
                assert!(a.check_morphism(&ac, &f).is_ok());
                assert!(f.is_iso());
            }
            other => panic!("expected iso, got {other:?}"),
        }
        assert!(is_isomorphic(&a, &b, &mut rng, &opts()).unwrap().is_not_iso());
    }

    #[test]
    fn random_objects_decompose_consistently() {
        let mut rng = seeded(5);
        for (p, m, n) in [(2, 2, 4), (3, 2, 5), (2, 3, 5), (5, 3, 6)] {
            let s = Shape::new(p, m, n).unwrap();
            for _ in 0..8 {
                let x = RepObject::random(&mut rng, s, 5, 3);
                let dec = decompose(&x, &mut rng, &opts());
                assert!(dec.check());
                assert!(dec.is_complete());
                let total = dec.pieces.iter().fold(crate::rep::DimPair { du: 0, dv: 0 }, |acc, q| acc.add(q.object.dims()));
                assert_eq!(total, x.dims());
                for q in &dec.pieces {
                    assert_eq!(is_indecomposable(&q.object, &mut rng, &opts()), Some(true));
                }
            }
        }
    }

    #[test]
    fn exhaustive_search_agrees_with_certificates() {
        let mut rng = seeded(6);
        let s = Shape::new(2, 2, 3).unwrap();
        for _ in 0..20 {
            let x = RepObject::random(&mut rng, s, 3, 2);
            let basis = hom_basis_prepared(&x, &Prepared::new(&x), &x).maps;
            if basis.len() > 12 || basis.len() < 2 {
                continue;
            }
            let ex = matches!(exhaustive_idempotents(&x, basis), Certificate::Local { .. });
            let cert = is_indecomposable(&x, &mut rng, &opts()).unwrap();
            assert_eq!(ex, cert);
        }
    }
}
