//! Morphism spaces and endomorphism algebras.
//!
//! A morphism `X -> Y` is a pair `(g, h)` with `g: U_X -> U_Y` commuting with
//! `alpha`, `h: V_X -> V_Y` commuting with `beta`, and `h·iota_X = iota_Y·g`.
//! Instead of solving for all matrix entries, the `T`-equivariant maps are
//! parametrised through cyclic (Jordan chain) bases of the source operators:
//! such a map is determined by the images `w_c` of the chain generators, and
//! `w_c` ranges over the kernel of the target operator raised to the chain
//! length. Only the compatibility with `iota` remains to be solved.

use crate::linalg::{Coords, Echelon, Mat};
use crate::rep::{DimPair, Morphism, RepError, RepObject};

/// A basis of Jordan chains `x, Nx, ..., N^{L-1}x` for a nilpotent operator `N`.
#[derive(Clone, Debug)]
pub struct CyclicBasis {
    /// Chain generators with their lengths, longest first.
    pub chains: Vec<(Vec<u64>, usize)>,
    /// The chain vectors as columns, chain by chain.
    pub q: Mat,
    /// The inverse of `q`.
    pub qinv: Mat,
}

impl CyclicBasis {
    /// Computes a cyclic basis of the nilpotent operator `op`.
    pub fn new(op: &Mat) -> Self {
        let p = op.modulus();
        let d = op.rows();
        // Kernels of the powers of op.
        let mut kernels: Vec<Mat> = vec![Mat::zeros(p, d, 0)];
        let mut pw = Mat::identity(p, d);
        while kernels.last().unwrap().cols() < d {
            pw = pw.mul(op);
            kernels.push(pw.nullspace());
            assert!(kernels.len() <= d + 1, "operator is not nilpotent");
        }
        let top = kernels.len() - 1;
        let mut chains: Vec<(Vec<u64>, usize)> = Vec::new();
        for k in (1..=top).rev() {
            let mut w = Echelon::new(p, d);
            for c in kernels[k - 1].columns() {
                w.insert(c);
            }
            for (x, len) in &chains {
                let mut v = x.clone();
                for _ in 0..(len - k) {
                    v = op.mul_vec(&v);
                }
                w.insert(v);
            }
            for c in kernels[k].columns() {
                if w.insert(c.clone()) {
                    chains.push((c, k));
                }
            }
        }
        let mut cols = Vec::with_capacity(d);
        for (x, len) in &chains {
            let mut v = x.clone();
            for _ in 0..*len {
                cols.push(v.clone());
                v = op.mul_vec(&v);
            }
        }
        let q = Mat::from_cols(p, d, &cols);
        let qinv = if d == 0 { Mat::zeros(p, 0, 0) } else { q.inverse().expect("chain vectors form a basis") };
        Self { chains, q, qinv }
    }

    /// The chain lengths (Jordan type), longest first.
    pub fn lengths(&self) -> Vec<usize> {
        self.chains.iter().map(|c| c.1).collect()
    }

    /// Basis matrices of all `T`-equivariant maps from this space to the
    /// space of `target_op`.
    pub fn equivariant_maps(&self, target_op: &Mat) -> Vec<Mat> {
        let p = target_op.modulus();
        let dt = target_op.rows();
        let ds = self.q.rows();
        let mut out = Vec::new();
        let mut offset = 0;
        for (_, len) in &self.chains {
            let rows_c: Vec<usize> = (offset..offset + len).collect();
            let qinv_c = self.qinv.select_rows(&rows_c);
            let ker = target_op.pow(*len as u64).nullspace();
            for w in ker.columns() {
                let mut cols = Vec::with_capacity(*len);
                let mut v = w;
                for _ in 0..*len {
                    cols.push(v.clone());
                    v = target_op.mul_vec(&v);
                }
                let c = Mat::from_cols(p, dt, &cols);
                out.push(c.mul(&qinv_c));
            }
            offset += len;
        }
        debug_assert!(out.iter().all(|h| h.cols() == ds));
        out
    }
}

/// A basis of `Hom(source, target)`.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub source: RepObject,
    pub target: RepObject,
    pub maps: Vec<Morphism>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    /// The linear combination `Σ c_i maps[i]`.
    pub fn combine(&self, c: &[u64]) -> Morphism {
        let mut acc = Morphism::zero(&self.source, &self.target);
        for (m, &ci) in self.maps.iter().zip(c) {
            if ci != 0 {
                acc = acc.add(&m.scale(ci));
            }
        }
        acc
    }

    /// Coordinate system on the span of the basis.
    pub fn coords(&self) -> Coords {
        let p = self.source.p();
        let len = self.source.du() * self.target.du() + self.source.dv() * self.target.dv();
        let cols: Vec<Vec<u64>> = self.maps.iter().map(|m| m.to_vec()).collect();
        Coords::new(&Mat::from_cols(p, len, &cols))
    }
}

/// Precomputed cyclic bases of both operators of an object.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub u: CyclicBasis,
    pub v: CyclicBasis,
}

impl Prepared {
    pub fn new(x: &RepObject) -> Self {
        Self { u: CyclicBasis::new(x.alpha()), v: CyclicBasis::new(x.beta()) }
    }
}

/// A basis of `Hom(x, y)`.
pub fn hom_basis(x: &RepObject, y: &RepObject) -> Result<HomBasis, RepError> {
    if x.shape != y.shape {
        return Err(RepError::Mismatch(format!("{} vs {}", x.shape, y.shape)));
    }
    Ok(hom_basis_prepared(x, &Prepared::new(x), y))
}

/// A basis of `Hom(x, y)` reusing cyclic bases of the source.
pub fn hom_basis_prepared(x: &RepObject, px: &Prepared, y: &RepObject) -> HomBasis {
    let p = x.p();
    let hs = px.v.equivariant_maps(y.beta());
    let gs = px.u.equivariant_maps(y.alpha());
    let rows = y.dv() * x.du();
    let mut cols = Vec::with_capacity(hs.len() + gs.len());
    for h in &hs {
        cols.push(h.mul(x.iota()).vec_cols());
    }
    for g in &gs {
        cols.push(y.iota().mul(g).neg().vec_cols());
    }
    let maps = if rows == 0 {
        // No compatibility condition: every parameter is free.
        let mut out: Vec<Morphism> = hs.iter().map(|h| Morphism::new(Mat::zeros(p, y.du(), x.du()), h.clone())).collect();
        out.extend(gs.iter().map(|g| Morphism::new(g.clone(), Mat::zeros(p, y.dv(), x.dv()))));
        out
    } else {
        let system = Mat::from_cols(p, rows, &cols);
        let null = system.nullspace();
        let mut out = Vec::with_capacity(null.cols());
        for k in 0..null.cols() {
            let mut h = Mat::zeros(p, y.dv(), x.dv());
            let mut g = Mat::zeros(p, y.du(), x.du());
            for (i, hm) in hs.iter().enumerate() {
                let c = null.get(i, k);
                if c != 0 {
                    h = h.add(&hm.scale(c));
                }
            }
            for (i, gm) in gs.iter().enumerate() {
                let c = null.get(hs.len() + i, k);
                if c != 0 {
                    g = g.add(&gm.scale(c));
                }
            }
            out.push(Morphism::new(g, h));
        }
        out
    };
    HomBasis { source: x.clone(), target: y.clone(), maps }
}

/// `dim Hom(x, y)`.
pub fn hom_dim(x: &RepObject, y: &RepObject) -> Result<usize, RepError> {
    Ok(hom_basis(x, y)?.dim())
}

/// The composition `f ∘ g`.
pub fn compose(f: &Morphism, g: &Morphism) -> Morphism {
    f.compose(g)
}

/// The endomorphism algebra of an object with structure constants.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub object: RepObject,
    pub basis: Vec<Morphism>,
    /// `mult[(i * d + j) * d + k]` is the coefficient of `e_k` in `e_i ∘ e_j`.
    pub mult: Vec<u64>,
    /// Coordinates of the identity.
    pub one: Vec<u64>,
    coords: Coords,
}

impl EndAlgebra {
    pub fn new(x: &RepObject) -> Self {
        let hb = hom_basis_prepared(x, &Prepared::new(x), x);
        Self::from_basis(x, hb.maps)
    }

    /// Builds the algebra from a basis of `End(x)`.
    pub fn from_basis(x: &RepObject, basis: Vec<Morphism>) -> Self {
        let p = x.p();
        let d = basis.len();
        let len = x.du() * x.du() + x.dv() * x.dv();
        let cols: Vec<Vec<u64>> = basis.iter().map(|m| m.to_vec()).collect();
        let coords = Coords::new(&Mat::from_cols(p, len, &cols));
        let mut mult = vec![0u64; d * d * d];
        for i in 0..d {
            for j in 0..d {
                let c = coords.coords_unchecked(&basis[i].compose(&basis[j]).to_vec());
                mult[(i * d + j) * d..(i * d + j + 1) * d].copy_from_slice(&c);
            }
        }
        let one = coords.coords(&Morphism::identity(x).to_vec()).expect("identity is an endomorphism");
        Self { object: x.clone(), basis, mult, one, coords }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn p(&self) -> u64 {
        self.object.p()
    }

    /// Product of two elements given in coordinates.
    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.dim();
        let p = self.p();
        let mut out = vec![0u64; d];
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                if b[j] == 0 {
                    continue;
                }
                let ab = a[i] * b[j] % p;
                let row = &self.mult[(i * d + j) * d..(i * d + j + 1) * d];
                for k in 0..d {
                    if row[k] != 0 {
                        out[k] = (out[k] + ab * row[k]) % p;
                    }
                }
            }
        }
        out
    }

    /// The morphism with the given coordinates.
    pub fn element(&self, c: &[u64]) -> Morphism {
        let mut acc = Morphism::zero(&self.object, &self.object);
        for (m, &ci) in self.basis.iter().zip(c) {
            if ci != 0 {
                acc = acc.add(&m.scale(ci));
            }
        }
        acc
    }

    /// Coordinates of an endomorphism.
    pub fn coords_of(&self, f: &Morphism) -> Option<Vec<u64>> {
        self.coords.coords(&f.to_vec())
    }

    /// Left multiplication by `a` as a `d x d` matrix on coordinates.
    pub fn left_mul_matrix(&self, a: &[u64]) -> Mat {
        let d = self.dim();
        let cols: Vec<Vec<u64>> = (0..d)
            .map(|j| {
                let mut e = vec![0; d];
                e[j] = 1;
                self.mul(a, &e)
            })
            .collect();
        Mat::from_cols(self.p(), d, &cols)
    }

    /// Checks associativity on all basis triples and the unit laws.
    pub fn check_axioms(&self) -> bool {
        let d = self.dim();
        let unit = |i: usize| {
            let mut e = vec![0; d];
            e[i] = 1;
            e
        };
        for i in 0..d {
            let ei = unit(i);
            if self.mul(&self.one, &ei) != ei || self.mul(&ei, &self.one) != ei {
                return false;
            }
            for j in 0..d {
                let ej = unit(j);
                let ij = self.mul(&ei, &ej);
                for k in 0..d {
                    let ek = unit(k);
                    if self.mul(&ij, &ek) != self.mul(&ei, &self.mul(&ej, &ek)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Isomorphism invariants: dimensions and ranks of `beta^k`, `alpha^k` and `beta^k·iota`.
pub fn fingerprint(x: &RepObject) -> Vec<usize> {
    let mut f = vec![x.du(), x.dv()];
    let mut b = x.beta().clone();
    for _ in 1..x.n() {
        f.push(b.rank());
        b = b.mul(x.beta());
    }
    let mut a = x.alpha().clone();
    for _ in 1..x.m() {
        f.push(a.rank());
        a = a.mul(x.alpha());
    }
    let mut bi = x.iota().clone();
    for _ in 0..x.n() {
        f.push(bi.rank());
        bi = x.beta().mul(&bi);
    }
    f
}

/// The dimension pair of an object, re-exported for convenience.
pub fn dim_pair(x: &RepObject) -> DimPair {
    x.dims()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rep::{BoxDiagram, Shape, StandardKind};
    use crate::rng::seeded;
    use rand::Rng;

    fn shape(p: u64, m: usize, n: usize) -> Shape {
        Shape::new(p, m, n).unwrap()
    }

    /// Counts morphisms by enumerating every pair of matrices over `F_2`.
    pub(crate) fn brute_force_hom_count(x: &RepObject, y: &RepObject) -> u64 {
        assert_eq!(x.p(), 2);
        let ng = x.du() * y.du();
        let nh = x.dv() * y.dv();
        let total = ng + nh;
        assert!(total <= 24, "brute force too large");
        let mut count = 0;
        for bits in 0u64..(1u64 << total) {
            let v: Vec<u64> = (0..total).map(|i| (bits >> i) & 1).collect();
            let f = Morphism::from_vec(2, x.dims(), y.dims(), &v);
            if x.check_morphism(y, &f).is_ok() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn cyclic_basis_of_random_nilpotent() {
        let mut rng = seeded(1);
        for _ in 0..50 {
            let x = RepObject::random(&mut rng, shape(3, 3, 5), 4, 2);
            let s = rng.gen_range(0..1000);
            let conj = random_invertible(&mut seeded(s), 3, x.dv());
            let op = conj.mul(x.beta()).mul(&conj.inverse().unwrap());
            let cb = CyclicBasis::new(&op);
            let mut lengths = cb.lengths();
            lengths.sort_unstable_by(|a, b| b.cmp(a));
            assert_eq!(lengths, x.jordan_type_v());
            // In the chain basis the operator is block-Jordan.
            let j = cb.qinv.mul(&op).mul(&cb.q);
            let mut blocks = Mat::zeros(3, 0, 0);
            for l in cb.lengths() {
                blocks = blocks.block_diag(&crate::rep::jordan_block(3, l));
            }
            assert_eq!(j, blocks);
        }
    }

    pub(crate) fn random_invertible(rng: &mut crate::rng::Rng, p: u64, n: usize) -> Mat {
        loop {
            let m = Mat::from_vec(p, n, n, (0..n * n).map(|_| rng.gen_range(0..p)).collect());
            if m.is_invertible() {
                return m;
            }
        }
    }

    #[test]
    fn hom_from_p_is_subspace() {
        let s = shape(3, 2, 4);
        let pobj = RepObject::standard(StandardKind::P, s);
        let mut rng = seeded(2);
        for _ in 0..30 {
            let x = RepObject::random(&mut rng, s, 3, 2);
            assert_eq!(hom_dim(&pobj, &x).unwrap(), x.du());
            assert!(hom_dim(&x, &x).unwrap() >= 1 || x.is_zero());
        }
    }

    #[test]
    fn end_of_y_and_brute_force() {
        for n in 1..=3 {
            let y = RepObject::standard(StandardKind::Y, shape(2, 1, n));
            assert_eq!(hom_dim(&y, &y).unwrap(), n);
            assert_eq!(brute_force_hom_count(&y, &y), 1 << n);
        }
    }

    #[test]
    fn hom_matches_brute_force_on_random_small_pairs() {
        let mut rng = seeded(3);
        let mut checked = 0;
        while checked < 60 {
            let s = shape(2, rng.gen_range(1..=2), 3);
            let x = RepObject::random(&mut rng, s, 2, 2);
            let y = RepObject::random(&mut rng, s, 2, 2);
            if x.du() * y.du() + x.dv() * y.dv() > 18 {
                continue;
            }
            let hb = hom_basis(&x, &y).unwrap();
            for f in &hb.maps {
                x.check_morphism(&y, f).unwrap();
            }
            assert_eq!(1u64 << hb.dim(), brute_force_hom_count(&x, &y));
            checked += 1;
        }
    }

    #[test]
    fn additivity() {
        let s = shape(3, 2, 4);
        let mut rng = seeded(4);
        for _ in 0..20 {
            let x = RepObject::random(&mut rng, s, 3, 2);
            let y = RepObject::random(&mut rng, s, 3, 2);
            let z = RepObject::random(&mut rng, s, 3, 2);
            let yz = y.direct_sum(&z).unwrap();
            assert_eq!(hom_dim(&x, &yz).unwrap(), hom_dim(&x, &y).unwrap() + hom_dim(&x, &z).unwrap());
            assert_eq!(hom_dim(&yz, &x).unwrap(), hom_dim(&y, &x).unwrap() + hom_dim(&z, &x).unwrap());
        }
    }

    #[test]
    fn end_algebra_axioms() {
        let s = shape(2, 2, 4);
        let mut rng = seeded(5);
        for _ in 0..10 {
            let x = RepObject::random(&mut rng, s, 3, 2);
            let e = EndAlgebra::new(&x);
            assert!(e.check_axioms());
            let f = &e.basis[0];
            assert_eq!(compose(&Morphism::identity(&x), f), *f);
        }
        // dim End equals the dimension of {h in End(V) : h(U) ⊆ U}, computed
        // from the k[T]-endomorphisms of V and the projection onto V/U.
        let a = crate::exhibits::a_lambda(5, 2).unwrap();
        let endv = CyclicBasis::new(a.beta()).equivariant_maps(a.beta());
        let (_, proj) = crate::rep::quotient_map(a.iota(), a.dv(), 5);
        let cols: Vec<Vec<u64>> = endv.iter().map(|h| proj.mul(h).mul(a.iota()).vec_cols()).collect();
        let sys = Mat::from_cols(5, proj.rows() * a.du(), &cols);
        assert_eq!(EndAlgebra::new(&a).dim(), endv.len() - sys.rank());
    }

    #[test]
    fn fingerprint_invariance() {
        let s = shape(3, 3, 5);
        let mut rng = seeded(6);
        let x = RepObject::random(&mut rng, s, 4, 3);
        let fx = fingerprint(&x);
        for _ in 0..100 {
            let a = random_invertible(&mut rng, 3, x.du());
            let b = random_invertible(&mut rng, 3, x.dv());
            assert_eq!(fingerprint(&x.conjugate(&a, &b)), fx);
        }
        let pobj = RepObject::standard(StandardKind::P, s);
        let iobj = RepObject::standard(StandardKind::I, s);
        assert_ne!(fingerprint(&pobj), fingerprint(&iobj));
        let _ = BoxDiagram::from_triples(&[1], &[]);
    }
}
