//! Subgroup embeddings of finite abelian `p`-groups and the layer functors
//! that turn them into graded `F_p`-representations.
//!
//! A group `D = ⊕ Z/p^{μ_c}` is stored inside the ambient `(Z/p^e)^s` with
//! `e = max μ_c` via `x_c ↦ p^{e-μ_c}·e_c`. Subgroups are row spans kept in
//! Howell form, which is canonical over the chain ring `Z/p^e`.

use crate::covering::GradedRep;
use crate::exhibits;
use crate::krull::{is_indecomposable, is_isomorphic, DecomposeOptions};
use crate::linalg::{check_prime, Mat};
use crate::rep::{RepError, RepObject, Shape};
use crate::rng::Rng;
use thiserror::Error;

/// Errors raised by the group computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZpnError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("generator {generator} term {term} refers to column {col}, but there are {cols} columns")]
    Column { generator: usize, term: usize, col: usize, cols: usize },
    #[error("layer functor for ({m},{n}) needs ambient exponent {n}, got {e}")]
    Exponent { m: usize, n: usize, e: u32 },
    #[error("row length {got} does not match {expected} columns")]
    Width { got: usize, expected: usize },
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// A matrix over `Z/p^e`; rows generate a subgroup of `(Z/p^e)^cols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpnMat {
    pub p: u64,
    pub e: u32,
    pub cols: usize,
    pub rows: Vec<Vec<u64>>,
}

impl ZpnMat {
    pub fn new(p: u64, e: u32, cols: usize, rows: Vec<Vec<i64>>) -> Result<Self, ZpnError> {
        check_params(p, e)?;
        let q = p.pow(e);
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != cols {
                return Err(ZpnError::Width { got: r.len(), expected: cols });
            }
            out.push(r.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect());
        }
        Ok(Self { p, e, cols, rows: out })
    }

    pub fn identity(p: u64, e: u32, n: usize) -> Result<Self, ZpnError> {
        check_params(p, e)?;
        Ok(Self { p, e, cols: n, rows: (0..n).map(|i| unit_vec(n, i)).collect() })
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.e)
    }
}

fn check_params(p: u64, e: u32) -> Result<(), ZpnError> {
    check_prime(p).map_err(|err| ZpnError::Parameters(err.to_string()))?;
    if e == 0 || (p as f64).powi(e as i32) > 1e15 {
        return Err(ZpnError::Parameters(format!("exponent {e} out of range for p = {p}")));
    }
    Ok(())
}

fn unit_vec(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// `p`-adic valuation of a nonzero residue.
fn valuation(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Inverse of a unit modulo `q = p^e` by the extended Euclidean algorithm.
fn unit_inverse(a: u64, q: u64) -> u64 {
    let (mut r0, mut r1) = (q as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    t0.rem_euclid(q as i128) as u64
}

/// A subgroup of `(Z/p^e)^cols` in Howell form: echelon rows whose pivots
/// are powers of `p`, entries above each pivot reduced below it, and every
/// element vanishing on the first `j` columns generated by the rows with
/// pivot column at least `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Howell {
    pub p: u64,
    pub e: u32,
    pub cols: usize,
    /// Rows of the form; row `i` has pivot `p^{pivots[i].1}` in column `pivots[i].0`.
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<(usize, u32)>,
}

/// The Howell form of the row span of `m`.
pub fn howell(m: &ZpnMat) -> Howell {
    howell_rows(m.p, m.e, m.cols, m.rows.clone())
}

fn howell_rows(p: u64, e: u32, cols: usize, rows: Vec<Vec<u64>>) -> Howell {
    let q = p.pow(e);
    let mut pool: Vec<Vec<u64>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(best) = (0..pool.len()).filter(|&i| pool[i][c] != 0).min_by_key(|&i| valuation(pool[i][c], p)) else {
            continue;
        };
        let mut piv = pool.swap_remove(best);
        let v = valuation(piv[c], p);
        let inv = unit_inverse(piv[c] / p.pow(v), q);
        for x in piv.iter_mut() {
            *x = mulmod(*x, inv, q);
        }
        for r in pool.iter_mut() {
            if r[c] != 0 {
                let k = r[c] / p.pow(v);
                for (x, y) in r.iter_mut().zip(&piv) {
                    *x = (*x + q - mulmod(k, *y, q)) % q;
                }
            }
        }
        let ann: Vec<u64> = piv.iter().map(|&x| mulmod(x, p.pow(e - v), q)).collect();
        if ann.iter().any(|&x| x != 0) {
            pool.push(ann);
        }
        pool.retain(|r| r.iter().any(|&x| x != 0));
        out.push(piv);
        pivots.push((c, v));
    }
    for r in 0..out.len() {
        for i in r + 1..out.len() {
            let (c, v) = pivots[i];
            let k = out[r][c] / p.pow(v);
            if k != 0 {
                let row_i = out[i].clone();
                for (x, y) in out[r].iter_mut().zip(&row_i) {
                    *x = (*x + q - mulmod(k, *y, q)) % q;
                }
            }
        }
    }
    Howell { p, e, cols, rows: out, pivots }
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

impl Howell {
    /// The zero subgroup.
    pub fn zero(p: u64, e: u32, cols: usize) -> Self {
        Self { p, e, cols, rows: Vec::new(), pivots: Vec::new() }
    }

    /// The whole ambient group.
    pub fn full(p: u64, e: u32, cols: usize) -> Self {
        howell_rows(p, e, cols, (0..cols).map(|i| unit_vec(cols, i)).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.e)
    }

    /// `log_p` of the subgroup order.
    pub fn log_order(&self) -> u32 {
        self.pivots.iter().map(|&(_, v)| self.e - v).sum()
    }

    /// Canonical remainder of `x` modulo the subgroup.
    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        let q = self.modulus();
        let mut x: Vec<u64> = x.iter().map(|&a| a % q).collect();
        for (row, &(c, v)) in self.rows.iter().zip(&self.pivots) {
            let k = x[c] / self.p.pow(v);
            if k != 0 {
                for (a, b) in x.iter_mut().zip(row) {
                    *a = (*a + q - mulmod(k, *b, q)) % q;
                }
            }
        }
        x
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.reduce(x).iter().all(|&a| a == 0)
    }

    pub fn contains_all(&self, o: &Howell) -> bool {
        o.rows.iter().all(|r| self.contains(r))
    }

    /// `S + T`.
    pub fn sum(&self, o: &Howell) -> Howell {
        let rows = self.rows.iter().chain(&o.rows).cloned().collect();
        howell_rows(self.p, self.e, self.cols, rows)
    }

    /// `S ∩ T`, read off from the rows of `[[S, S], [T, 0]]` vanishing on the left half.
    pub fn intersect(&self, o: &Howell) -> Howell {
        let n = self.cols;
        let mut rows = Vec::new();
        for r in &self.rows {
            rows.push(r.iter().chain(r).copied().collect());
        }
        for r in &o.rows {
            rows.push(r.iter().copied().chain(std::iter::repeat_n(0, n)).collect());
        }
        self.right_half(howell_rows(self.p, self.e, 2 * n, rows))
    }

    fn right_half(&self, h: Howell) -> Howell {
        let n = self.cols;
        let rows = h.rows.iter().zip(&h.pivots).filter(|(_, &(c, _))| c >= n).map(|(r, _)| r[n..].to_vec()).collect();
        howell_rows(self.p, self.e, n, rows)
    }

    /// `p^k·S`.
    pub fn mult_by_p_power(&self, k: u32) -> Howell {
        let q = self.modulus();
        let f = if k >= self.e { 0 } else { self.p.pow(k) };
        let rows = self.rows.iter().map(|r| r.iter().map(|&x| mulmod(x, f, q)).collect()).collect();
        howell_rows(self.p, self.e, self.cols, rows)
    }

    /// `{x ∈ (Z/p^e)^cols : p^k·x ∈ S}`.
    pub fn preimage_under_p_power(&self, k: u32) -> Howell {
        let n = self.cols;
        let q = self.modulus();
        let f = if k >= self.e { 0 } else { self.p.pow(k) };
        let mut rows = Vec::new();
        for i in 0..n {
            let mut r = vec![0; 2 * n];
            r[i] = f % q;
            r[n + i] = 1;
            rows.push(r);
        }
        for r in &self.rows {
            rows.push(r.iter().copied().chain(std::iter::repeat_n(0, n)).collect());
        }
        self.right_half(howell_rows(self.p, self.e, 2 * n, rows))
    }

    /// The subgroup generated by the given elements.
    pub fn span(p: u64, e: u32, cols: usize, gens: &[Vec<u64>]) -> Howell {
        howell_rows(p, e, cols, gens.to_vec())
    }
}

/// One term `coeff·p^exp·x_col` of a generator; `col` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZTerm {
    pub col: usize,
    pub exp: u32,
    pub coeff: i64,
}

impl ZTerm {
    pub fn new(col: usize, exp: u32, coeff: i64) -> Self {
        Self { col, exp, coeff }
    }
}

/// A subgroup `A ⊆ D = ⊕ Z/p^{μ_c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpnEmbedding {
    pub p: u64,
    /// Ambient exponent `e = max μ_c`.
    pub e: u32,
    /// Column orders `μ_c`, as given.
    pub orders: Vec<u32>,
    pub subgroup: Howell,
}

impl ZpnEmbedding {
    /// Builds the subgroup of `⊕ Z/p^{μ_c}` generated by the given elements.
    pub fn new(p: u64, orders: &[u32], generators: &[Vec<ZTerm>]) -> Result<Self, ZpnError> {
        let e = orders.iter().copied().max().ok_or_else(|| ZpnError::Parameters("no columns".into()))?;
        check_params(p, e)?;
        if orders.contains(&0) {
            return Err(ZpnError::Parameters("column orders must be positive".into()));
        }
        let q = p.pow(e) as i128;
        let s = orders.len();
        let mut gens = Vec::with_capacity(generators.len());
        for (gi, g) in generators.iter().enumerate() {
            let mut v = vec![0i128; s];
            for (ti, t) in g.iter().enumerate() {
                if t.col == 0 || t.col > s {
                    return Err(ZpnError::Column { generator: gi + 1, term: ti + 1, col: t.col, cols: s });
                }
                let shift = e - orders[t.col - 1] + t.exp;
                if shift < e {
                    v[t.col - 1] += t.coeff as i128 * p.pow(shift) as i128;
                }
            }
            gens.push(v.iter().map(|&x| x.rem_euclid(q) as u64).collect());
        }
        Ok(Self { p, e, orders: orders.to_vec(), subgroup: Howell::span(p, e, s, &gens) })
    }

    /// The whole group `D` inside the ambient.
    pub fn group(&self) -> Howell {
        let s = self.orders.len();
        let gens: Vec<Vec<u64>> = (0..s)
            .map(|c| {
                let mut v = vec![0; s];
                v[c] = self.p.pow(self.e - self.orders[c]);
                v
            })
            .collect();
        Howell::span(self.p, self.e, s, &gens)
    }

    /// `D[p^k] = {x ∈ D : p^k·x = 0}`.
    pub fn torsion(&self, k: u32) -> Howell {
        Howell::zero(self.p, self.e, self.orders.len()).preimage_under_p_power(k).intersect(&self.group())
    }

    /// Block direct sum; both embeddings must share the ambient exponent.
    pub fn direct_sum(&self, o: &ZpnEmbedding) -> Result<ZpnEmbedding, ZpnError> {
        if self.p != o.p || self.e != o.e {
            return Err(ZpnError::Parameters("direct sum needs equal p and ambient exponent".into()));
        }
        let (a, b) = (self.orders.len(), o.orders.len());
        let mut rows: Vec<Vec<u64>> = self.subgroup.rows.iter().map(|r| r.iter().copied().chain(std::iter::repeat_n(0, b)).collect()).collect();
        rows.extend(o.subgroup.rows.iter().map(|r| std::iter::repeat_n(0, a).chain(r.iter().copied()).collect()));
        let orders: Vec<u32> = self.orders.iter().chain(&o.orders).copied().collect();
        Ok(ZpnEmbedding { p: self.p, e: self.e, orders, subgroup: Howell::span(self.p, self.e, a + b, &rows) })
    }
}

/// A layer functor: `L_2 = Σ_t (p^{a_t}·D ∩ D[p^{b_t}])`, `L_i = p^{2-i}·L_2`
/// for `i < 2` and `L_i = {x : p^{i-2}·x ∈ L_2}` for `i > 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerFunctor {
    pub m: usize,
    pub n: usize,
    /// Pairs `(a, b)`.
    pub terms: Vec<(u32, u32)>,
}

impl LayerFunctor {
    /// The functor `S(Z/p^7) -> S_3(k[T]/T^7)` with
    /// `L_2 = (p^4 D ∩ D[p^2]) + (p^2 D ∩ D[p])`.
    pub fn s3n7() -> Self {
        Self { m: 3, n: 7, terms: vec![(4, 2), (2, 1)] }
    }

    /// Experimental analogue for `S(Z/p^6) -> S_4(k[T]/T^6)` with
    /// `L_2 = (p^2 D ∩ D[p^3]) + D[p]`, chosen so that Birkhoff's generators
    /// become homogeneous.
    pub fn s4n6() -> Self {
        Self { m: 4, n: 6, terms: vec![(2, 3), (0, 1)] }
    }
}

/// The filtration `L_lo ⊆ … ⊆ L_hi = D` with `L_{lo-1} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    pub lo: i64,
    pub layers: Vec<Howell>,
}

impl Filtration {
    /// `log_p |L_i / L_{i-1}|` along the filtration, bottom first.
    pub fn quotient_dims(&self) -> Vec<u32> {
        let mut prev = 0;
        self.layers
            .iter()
            .map(|l| {
                let o = l.log_order();
                let d = o - prev;
                prev = o;
                d
            })
            .collect()
    }

    pub fn layer(&self, i: i64) -> Option<&Howell> {
        if i < self.lo {
            return None;
        }
        self.layers.get((i - self.lo) as usize)
    }
}

/// The layer filtration of `D` for the given functor. The layers depend on
/// `D` only, never on the subgroup.
pub fn layer_filtration(emb: &ZpnEmbedding, f: &LayerFunctor) -> Result<Filtration, ZpnError> {
    if emb.e as usize != f.n {
        return Err(ZpnError::Exponent { m: f.m, n: f.n, e: emb.e });
    }
    let d = emb.group();
    let s = emb.orders.len();
    let mut l2 = Howell::zero(emb.p, emb.e, s);
    for &(a, b) in &f.terms {
        l2 = l2.sum(&d.mult_by_p_power(a).intersect(&emb.torsion(b)));
    }
    let mut below = Vec::new();
    let mut k = 1;
    loop {
        let l = l2.mult_by_p_power(k);
        if l.rows.is_empty() {
            break;
        }
        below.push(l);
        k += 1;
    }
    let lo = 2 - below.len() as i64;
    let mut layers: Vec<Howell> = below.into_iter().rev().collect();
    layers.push(l2.clone());
    let top = d.log_order();
    let mut k = 1;
    while layers.last().unwrap().log_order() < top {
        layers.push(l2.preimage_under_p_power(k).intersect(&d));
        k += 1;
        if k > 4 * emb.e {
            return Err(ZpnError::Parameters("layer functor does not exhaust the group".into()));
        }
    }
    Ok(Filtration { lo, layers })
}

/// Coordinates on a quotient `S / T` of exponent `p`.
struct Section {
    p: u64,
    reps: Vec<Vec<u64>>,
    /// Howell form of `[[R | I], [T | 0]]`.
    aug: Howell,
}

impl Section {
    fn new(big: &Howell, small: &Howell) -> Section {
        let (p, e, n) = (big.p, big.e, big.cols);
        let mut acc = small.clone();
        let mut reps = Vec::new();
        for r in &big.rows {
            // The rows of a Howell form generate the group; their p-multiples
            // already lie in `small`, so the images span the quotient.
            if !acc.contains(r) {
                acc = acc.sum(&Howell::span(p, e, n, std::slice::from_ref(r)));
                reps.push(r.clone());
            }
        }
        let k = reps.len();
        let mut rows = Vec::new();
        for (j, r) in reps.iter().enumerate() {
            let mut row = r.clone();
            row.extend((0..k).map(|i| u64::from(i == j)));
            rows.push(row);
        }
        for r in &small.rows {
            rows.push(r.iter().copied().chain(std::iter::repeat_n(0, k)).collect());
        }
        Section { p, reps, aug: howell_rows(p, e, n + k, rows) }
    }

    fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates over `F_p` of `x ∈ S` modulo `T`.
    fn coords(&self, x: &[u64]) -> Vec<u64> {
        let n = x.len();
        let mut v = x.to_vec();
        v.extend(std::iter::repeat_n(0, self.dim()));
        let r = self.aug.reduce(&v);
        debug_assert!(r[..n].iter().all(|&a| a == 0));
        let q = self.aug.modulus();
        r[n..].iter().map(|&y| ((q - y) % q) % self.p).collect()
    }

    fn matrix_of(&self, xs: &[Vec<u64>]) -> Mat {
        let cols: Vec<Vec<u64>> = xs.iter().map(|x| self.coords(x)).collect();
        Mat::from_cols(self.p, self.dim(), &cols)
    }
}

/// The graded representation attached to an embedding: `M_i = L_i/L_{i-1}`,
/// `M'_i = (A∩L_i)/(A∩L_{i-1})`, with all maps induced by multiplication by `p`.
pub fn to_graded(emb: &ZpnEmbedding, f: &LayerFunctor) -> Result<GradedRep, ZpnError> {
    let shape = Shape::new(emb.p, f.m, f.n)?;
    let filt = layer_filtration(emb, f)?;
    let (p, e, s) = (emb.p, emb.e, emb.orders.len());
    let zero = Howell::zero(p, e, s);
    let k = filt.layers.len();
    let big: Vec<&Howell> = filt.layers.iter().collect();
    let sub: Vec<Howell> = filt.layers.iter().map(|l| l.intersect(&emb.subgroup)).collect();
    let mut tot_sec = Vec::with_capacity(k);
    let mut sub_sec = Vec::with_capacity(k);
    for j in 0..k {
        let (pb, ps) = if j == 0 { (&zero, &zero) } else { (big[j - 1], &sub[j - 1]) };
        tot_sec.push(Section::new(big[j], pb));
        sub_sec.push(Section::new(&sub[j], ps));
    }
    let q = p.pow(e);
    let times_p = |v: &Vec<u64>| -> Vec<u64> { v.iter().map(|&x| mulmod(x, p, q)).collect() };
    let mut beta = Vec::with_capacity(k);
    let mut alpha = Vec::with_capacity(k);
    let mut iota = Vec::with_capacity(k);
    for j in 0..k {
        let (t, u) = (&tot_sec[j], &sub_sec[j]);
        iota.push(t.matrix_of(&u.reps));
        if j == 0 {
            beta.push(Mat::zeros(p, 0, t.dim()));
            alpha.push(Mat::zeros(p, 0, u.dim()));
        } else {
            let bt: Vec<Vec<u64>> = t.reps.iter().map(times_p).collect();
            let bu: Vec<Vec<u64>> = u.reps.iter().map(times_p).collect();
            beta.push(tot_sec[j - 1].matrix_of(&bt));
            alpha.push(sub_sec[j - 1].matrix_of(&bu));
        }
    }
    Ok(GradedRep::new(shape, filt.lo, beta, alpha, iota)?)
}

/// The `F_p`-representation of an embedding: the cover of [`to_graded`].
pub fn to_rep(emb: &ZpnEmbedding, f: &LayerFunctor) -> Result<RepObject, ZpnError> {
    Ok(to_graded(emb, f)?.cover())
}

/// `(C_λ ⊆ D)` with `D = Z/p^7 ⊕ Z/p^6 ⊕ Z/p^4 ⊕ Z/p^3 ⊕ Z/p` and `C_λ`
/// generated by `p^4x1 + px4 + x5`, `p^3x2 + p^2x3 + x5`, `p^3x3 + λp^2x4`.
pub fn c_lambda(p: u64, lambda: i64) -> Result<ZpnEmbedding, ZpnError> {
    ZpnEmbedding::new(
        p,
        &[7, 6, 4, 3, 1],
        &[
            vec![ZTerm::new(1, 4, 1), ZTerm::new(4, 1, 1), ZTerm::new(5, 0, 1)],
            vec![ZTerm::new(2, 3, 1), ZTerm::new(3, 2, 1), ZTerm::new(5, 0, 1)],
            vec![ZTerm::new(3, 3, 1), ZTerm::new(4, 2, lambda)],
        ],
    )
}

/// Birkhoff's `(A_λ ⊆ B)` with `B = Z/p^6 ⊕ Z/p^4 ⊕ Z/p^2` and generators
/// `p^2x1 + px2 + x3`, `p^2x2 + λpx3`.
pub fn birkhoff_embedding(p: u64, lambda: i64) -> Result<ZpnEmbedding, ZpnError> {
    ZpnEmbedding::new(
        p,
        &[6, 4, 2],
        &[vec![ZTerm::new(1, 2, 1), ZTerm::new(2, 1, 1), ZTerm::new(3, 0, 1)], vec![ZTerm::new(2, 2, 1), ZTerm::new(3, 1, lambda)]],
    )
}

/// Outcome of checking a family of embeddings through a layer functor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub p: u64,
    /// Number of family members built.
    pub members: usize,
    /// Members whose image is certified indecomposable.
    pub indecomposable: usize,
    /// Pairs `(λ, μ)` of members whose images were not shown non-isomorphic.
    pub undistinguished: Vec<(u64, u64)>,
    /// Members whose image matches the expected `F_p` object.
    pub matches_expected: usize,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.indecomposable == self.members && self.undistinguished.is_empty() && self.matches_expected == self.members
    }
}

fn check_family(
    p: u64,
    build: impl Fn(i64) -> Result<ZpnEmbedding, ZpnError>,
    expected: impl Fn(i64) -> Result<RepObject, RepError>,
    f: &LayerFunctor,
    rng: &mut Rng,
) -> Result<FamilyReport, ZpnError> {
    let opts = DecomposeOptions::default();
    let mut images = Vec::new();
    let mut indecomposable = 0;
    let mut matches_expected = 0;
    for lambda in 0..p as i64 {
        let x = to_rep(&build(lambda)?, f)?;
        if is_indecomposable(&x, rng, &opts) == Some(true) {
            indecomposable += 1;
        }
        if is_isomorphic(&x, &expected(lambda)?, rng, &opts)?.is_iso() {
            matches_expected += 1;
        }
        images.push(x);
    }
    let mut undistinguished = Vec::new();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if !is_isomorphic(&images[i], &images[j], rng, &opts)?.is_not_iso() {
                undistinguished.push((i as u64, j as u64));
            }
        }
    }
    Ok(FamilyReport { p, members: images.len(), indecomposable, undistinguished, matches_expected })
}

/// Builds `(C_λ ⊆ D)` for every `λ ∈ F_p`, maps each through the `(3,7)`
/// layer functor and checks indecomposability, pairwise non-isomorphism and
/// agreement with `A_λ`.
pub fn verify_birkhoff_family(p: u64, rng: &mut Rng) -> Result<FamilyReport, ZpnError> {
    check_family(p, |l| c_lambda(p, l), |l| exhibits::a_lambda(p, l), &LayerFunctor::s3n7(), rng)
}

/// The same check for Birkhoff's family in `S(Z/p^6)` through the
/// experimental `(4,6)` layer functor.
pub fn verify_birkhoff_original(p: u64, rng: &mut Rng) -> Result<FamilyReport, ZpnError> {
    check_family(p, |l| birkhoff_embedding(p, l), |l| exhibits::birkhoff(p, l), &LayerFunctor::s4n6(), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ar::same_indecomposable;
    use crate::krull::decompose;
    use crate::rep::StandardKind;
    use crate::rng::seeded;
    use rand::Rng as _;
    use std::collections::BTreeSet;

    /// All elements of the span of `gens`, by closure under addition.
    fn enumerate_span(p: u64, e: u32, n: usize, gens: &[Vec<u64>]) -> BTreeSet<Vec<u64>> {
        let q = p.pow(e);
        let mut set = BTreeSet::from([vec![0; n]]);
        let mut frontier = vec![vec![0; n]];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y: Vec<u64> = x.iter().zip(g).map(|(a, b)| (a + b) % q).collect();
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    fn all_vectors(q: u64, n: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out.into_iter().flat_map(|v| (0..q).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }

    fn random_rows(rng: &mut Rng, q: u64, n: usize, k: usize) -> Vec<Vec<u64>> {
        (0..k).map(|_| (0..n).map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(0..q) }).collect()).collect()
    }

    #[test]
    fn howell_trivial_examples() {
        let id = ZpnMat::identity(3, 2, 3).unwrap();
        assert_eq!(howell(&id).rows, id.rows);
        let px = ZpnMat::new(2, 2, 1, vec![vec![2]]).unwrap();
        let h = howell(&px);
        assert_eq!(h.rows, vec![vec![2]]);
        assert_eq!(h.log_order(), 1);
        let unit = ZpnMat::new(5, 3, 1, vec![vec![-3 * 25]]).unwrap();
        assert_eq!(howell(&unit).rows, vec![vec![25]]);
    }

    #[test]
    fn howell_against_exhaustive_spans() {
        let mut rng = seeded(31);
        for (p, e, n) in [(3u64, 2u32, 3usize), (2, 3, 2), (2, 2, 4), (5, 2, 2)] {
            let q = p.pow(e);
            let universe = all_vectors(q, n);
            for _ in 0..40 {
                let k = rng.gen_range(0..4);
                let gens = random_rows(&mut rng, q, n, k);
                let h = Howell::span(p, e, n, &gens);
                assert_eq!(howell_rows(p, e, n, h.rows.clone()), h, "idempotent");
                let span = enumerate_span(p, e, n, &gens);
                assert_eq!(span.len() as u64, p.pow(h.log_order()));
                for x in &universe {
                    assert_eq!(h.contains(x), span.contains(x));
                }
                // Another generating set of the same span gives the same form.
                let mut other: Vec<Vec<u64>> = span.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
                other.extend(h.rows.iter().cloned());
                other.reverse();
                assert_eq!(Howell::span(p, e, n, &other), h, "canonical");
            }
        }
    }

    #[test]
    fn subgroup_operations_against_exhaustive_sets() {
        let mut rng = seeded(32);
        for (p, e, n) in [(2u64, 4u32, 2usize), (2, 2, 4), (3, 2, 2)] {
            let q = p.pow(e);
            let universe = all_vectors(q, n);
            for _ in 0..30 {
                let (ka, kb) = (rng.gen_range(0..3), rng.gen_range(0..3));
                let ga = random_rows(&mut rng, q, n, ka);
                let gb = random_rows(&mut rng, q, n, kb);
                let (a, b) = (Howell::span(p, e, n, &ga), Howell::span(p, e, n, &gb));
                let (sa, sb) = (enumerate_span(p, e, n, &ga), enumerate_span(p, e, n, &gb));
                let inter = a.intersect(&b);
                let sum = a.sum(&b);
                let k = rng.gen_range(0..=e);
                let mult = a.mult_by_p_power(k);
                let pre = a.preimage_under_p_power(k);
                let pk = if k >= e { 0 } else { p.pow(k) };
                for x in &universe {
                    assert_eq!(inter.contains(x), sa.contains(x) && sb.contains(x));
                    let px: Vec<u64> = x.iter().map(|&v| v * pk % q).collect();
                    assert_eq!(pre.contains(x), sa.contains(&px));
                }
                let expected_sum: BTreeSet<Vec<u64>> =
                    sa.iter().flat_map(|x| sb.iter().map(move |y| x.iter().zip(y).map(|(u, v)| (u + v) % q).collect())).collect();
                assert_eq!(p.pow(sum.log_order()), expected_sum.len() as u64);
                let expected_mult: BTreeSet<Vec<u64>> = sa.iter().map(|x| x.iter().map(|&v| v * pk % q).collect()).collect();
                assert_eq!(p.pow(mult.log_order()), expected_mult.len() as u64);
                assert!(a.contains_all(&pre.mult_by_p_power(k)));
            }
            assert_eq!(Howell::zero(p, e, n).preimage_under_p_power(e), Howell::full(p, e, n));
        }
    }

    /// Number of boxes of a column of order `μ` in degrees `≤ i` under the
    /// `(3,7)` layer functor, from the per-column closed form of `L_2`.
    fn column_count(mu: u32, i: i64) -> u32 {
        let a = 4u32.max(mu.saturating_sub(2)).min(2u32.max(mu.saturating_sub(1))).min(mu);
        let top = a as i64 + 2;
        (i - (top - mu as i64)).clamp(0, mu as i64) as u32
    }

    #[test]
    fn layer_filtration_of_the_family() {
        let orders = [7u32, 6, 4, 3, 1];
        let oracle: Vec<u32> = (1..=7).map(|i| orders.iter().map(|&mu| column_count(mu, i) - column_count(mu, i - 1)).sum()).collect();
        for p in [2u64, 3, 5] {
            let f0 = layer_filtration(&c_lambda(p, 0).unwrap(), &LayerFunctor::s3n7()).unwrap();
            let f1 = layer_filtration(&c_lambda(p, 1).unwrap(), &LayerFunctor::s3n7()).unwrap();
            let triv = layer_filtration(&ZpnEmbedding::new(p, &orders, &[]).unwrap(), &LayerFunctor::s3n7()).unwrap();
            assert_eq!(f0, f1);
            assert_eq!(f0, triv);
            assert_eq!(f0.lo, 1);
            assert_eq!(f0.quotient_dims(), oracle);
            assert_eq!(f0.quotient_dims().iter().sum::<u32>(), orders.iter().sum::<u32>());
            let g0 = to_graded(&c_lambda(p, 0).unwrap(), &LayerFunctor::s3n7()).unwrap();
            let g1 = to_graded(&c_lambda(p, 1).unwrap(), &LayerFunctor::s3n7()).unwrap();
            assert_ne!(g0, g1);
        }
        assert_eq!(oracle, vec![2, 4, 5, 4, 3, 2, 1]);
    }

    #[test]
    fn wrong_exponent_is_rejected() {
        let e = ZpnEmbedding::new(2, &[6, 2], &[]).unwrap();
        assert!(matches!(layer_filtration(&e, &LayerFunctor::s3n7()), Err(ZpnError::Exponent { .. })));
    }

    #[test]
    fn zero_subgroup_gives_y() {
        let e = ZpnEmbedding::new(3, &[7], &[]).unwrap();
        let x = to_rep(&e, &LayerFunctor::s3n7()).unwrap();
        let s = Shape::new(3, 3, 7).unwrap();
        assert!(same_indecomposable(&x, &RepObject::standard(StandardKind::Y, s)));
    }

    #[test]
    fn images_lie_in_s_and_match_a_lambda() {
        let mut rng = seeded(33);
        let opts = DecomposeOptions::default();
        for p in [2u64, 3] {
            for l in 0..p as i64 {
                let g = to_graded(&c_lambda(p, l).unwrap(), &LayerFunctor::s3n7()).unwrap();
                assert!(g.in_s());
                let x = g.cover();
                assert!(x.validate().is_valid());
                let a = exhibits::a_lambda(p, l).unwrap();
                assert!(is_isomorphic(&x, &a, &mut rng, &opts).unwrap().is_iso(), "p = {p}, λ = {l}");
            }
        }
    }

    #[test]
    fn family_report_over_f2() {
        let mut rng = seeded(34);
        let r = verify_birkhoff_family(2, &mut rng).unwrap();
        assert_eq!(r.members, 2);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn to_rep_is_additive() {
        let mut rng = seeded(35);
        let opts = DecomposeOptions::default();
        let sum = c_lambda(2, 0).unwrap().direct_sum(&c_lambda(2, 1).unwrap()).unwrap();
        let x = to_rep(&sum, &LayerFunctor::s3n7()).unwrap();
        let d = decompose(&x, &mut rng, &opts);
        assert!(d.is_complete());
        assert_eq!(d.pieces.len(), 2);
        for l in 0..2 {
            let a = exhibits::a_lambda(2, l).unwrap();
            let hits = d.pieces.iter().filter(|pc| is_isomorphic(&pc.object, &a, &mut rng, &opts).unwrap().is_iso()).count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn birkhoff_variant_over_f3() {
        let mut rng = seeded(36);
        let r = verify_birkhoff_original(3, &mut rng).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
