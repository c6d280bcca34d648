//! Univariate polynomials over `F_p`: arithmetic, characteristic polynomials
//! of matrices, irreducibility testing and complete factorisation
//! (square-free, distinct-degree and equal-degree splitting).

use rand::Rng;

use crate::linalg::{inv_mod, Mat};

/// A polynomial over `F_p` with coefficients listed from the constant term up.
///
/// The coefficient vector never has trailing zeros, so the zero polynomial is
/// the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    p: u64,
    c: Vec<u64>,
}

impl Poly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|v| v % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Self { p, c }
    }

    pub fn zero(p: u64) -> Self {
        Self { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    /// The monomial `t`.
    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p);
        Self::new(self.p, self.c.iter().map(|v| v * inv % self.p).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let v = (0..n).map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % self.p).collect();
        Poly::new(self.p, v)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let v = (0..n).map(|i| (self.c.get(i).copied().unwrap_or(0) + self.p - o.c.get(i).copied().unwrap_or(0)) % self.p).collect();
        Poly::new(self.p, v)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.p);
        }
        let mut v = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                v[i + j] = (v[i + j] + a * b) % self.p;
            }
        }
        Poly::new(self.p, v)
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let p = self.p;
        let mut r = self.c.clone();
        let dd = d.c.len() - 1;
        if r.len() <= dd {
            return (Poly::zero(p), self.clone());
        }
        let inv = inv_mod(d.lead(), p);
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = r[k + dd] * inv % p;
            q[k] = coef;
            if coef != 0 {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] = (r[k + j] + (p - coef) * b) % p;
                }
            }
        }
        r.truncate(dd);
        (Poly::new(p, q), Poly::new(p, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let v = self.c.iter().enumerate().skip(1).map(|(i, a)| (i as u64 % self.p) * a % self.p).collect();
        Poly::new(self.p, v)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut result = Poly::one(self.p).rem(m);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        result
    }

    /// Evaluates the polynomial at a square matrix (Horner scheme).
    pub fn eval_mat(&self, a: &Mat) -> Mat {
        let n = a.rows();
        let mut acc = Mat::zeros(self.p, n, n);
        let id = Mat::identity(self.p, n);
        for &c in self.c.iter().rev() {
            acc = acc.mul(a).add(&id.scale(c));
        }
        acc
    }

    /// The `p`-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> Poly {
        let p = self.p as usize;
        let v = self.c.iter().step_by(p).copied().collect();
        Poly::new(self.p, v)
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        let f = self.monic();
        let x = Poly::x(self.p);
        // frob[k] = x^(q^k) mod f
        let mut frob = vec![x.rem(&f)];
        for k in 1..=d {
            let next = frob[k - 1].pow_mod(self.p as u128, &f);
            frob.push(next);
        }
        if frob[d] != x.rem(&f) {
            return false;
        }
        for r in prime_divisors(d) {
            let h = frob[d / r].sub(&x);
            if h.gcd(&f).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Monic irreducible factors with multiplicities, sorted.
    pub fn factor<R: Rng>(&self, rng: &mut R) -> Vec<(Poly, usize)> {
        assert!(!self.is_zero(), "factorisation of the zero polynomial");
        let mut out = Vec::new();
        for (sf, mult) in self.monic().squarefree() {
            for (g, deg) in sf.distinct_degree() {
                for f in g.equal_degree(deg, rng) {
                    out.push((f, mult));
                }
            }
        }
        out.sort();
        // Merge equal factors that arise from different square-free layers.
        let mut merged: Vec<(Poly, usize)> = Vec::new();
        for (f, m) in out {
            match merged.last_mut() {
                Some((g, k)) if *g == f => *k += m,
                _ => merged.push((f, m)),
            }
        }
        merged
    }

    /// Square-free decomposition of a monic polynomial: pairs `(g_i, i)`.
    fn squarefree(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        if d.is_zero() {
            for (g, m) in self.pth_root().squarefree() {
                out.push((g, m * self.p as usize));
            }
            return out;
        }
        let mut c = self.gcd(&d);
        let mut w = self.divrem(&c).0;
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let y = w.gcd(&c);
            let z = w.divrem(&y).0;
            if z.degree().unwrap_or(0) > 0 {
                out.push((z.monic(), i));
            }
            i += 1;
            w = y;
            c = c.divrem(&w).0;
        }
        if c.degree().unwrap_or(0) > 0 {
            for (g, m) in c.monic().pth_root().squarefree() {
                out.push((g, m * self.p as usize));
            }
        }
        out
    }

    /// Distinct-degree factorisation of a square-free monic polynomial.
    fn distinct_degree(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut f = self.clone();
        let x = Poly::x(self.p);
        let mut h = x.rem(&f);
        let mut d = 0;
        while f.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = h.pow_mod(self.p as u128, &f);
            let g = h.sub(&x).gcd(&f);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), d));
                f = f.divrem(&g).0;
                h = h.rem(&f);
            }
        }
        if f.degree().unwrap_or(0) > 0 {
            let deg = f.degree().unwrap();
            out.push((f.monic(), deg));
        }
        out
    }

    /// Splits a product of distinct irreducibles of degree `d` (Cantor–Zassenhaus).
    fn equal_degree<R: Rng>(&self, d: usize, rng: &mut R) -> Vec<Poly> {
        let n = self.degree().unwrap_or(0);
        if n == d {
            return vec![self.monic()];
        }
        let p = self.p;
        loop {
            let a = Poly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let b = if p == 2 {
                // Trace map a + a^2 + ... + a^(2^(d-1)) for characteristic two.
                let mut t = a.rem(self);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(self);
                    acc = acc.add(&t);
                }
                acc
            } else {
                // a^((q^d - 1)/2) as the norm a·a^q···a^(q^(d-1)) raised to (q - 1)/2.
                let mut t = a.rem(self);
                let mut norm = t.clone();
                for _ in 1..d {
                    t = t.pow_mod(p as u128, self);
                    norm = norm.mul(&t).rem(self);
                }
                norm.pow_mod(((p - 1) / 2) as u128, self).sub(&Poly::one(p))
            };
            let g = b.gcd(self);
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let mut out = g.equal_degree(d, rng);
                out.extend(self.divrem(&g).0.monic().equal_degree(d, rng));
                return out;
            }
        }
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Characteristic polynomial `det(t·I − A)` via reduction to Hessenberg form.
pub fn charpoly(a: &Mat) -> Poly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let p = a.modulus();
    let n = a.rows();
    let mut h: Vec<Vec<u64>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    // Similarity reduction to upper Hessenberg form.
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else { continue };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = inv_mod(h[j + 1][j], p);
        for i in j + 2..n {
            let f = h[i][j] * inv % p;
            if f == 0 {
                continue;
            }
            // Row i -= f * row (j+1), then column (j+1) += f * column i.
            for k in 0..n {
                h[i][k] = (h[i][k] + (p - f) * h[j + 1][k]) % p;
            }
            for row in h.iter_mut() {
                row[j + 1] = (row[j + 1] + f * row[i]) % p;
            }
        }
    }
    // Recurrence on leading principal submatrices.
    let mut polys: Vec<Poly> = vec![Poly::one(p)];
    for k in 0..n {
        let lin = Poly::new(p, vec![(p - h[k][k]) % p, 1]);
        let mut pk = lin.mul(&polys[k]);
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = prod * h[i + 1][i] % p;
            let coef = prod * h[i][k] % p;
            if coef != 0 {
                pk = pk.sub(&polys[i].mul(&Poly::new(p, vec![coef])));
            }
        }
        polys.push(pk);
    }
    polys.pop().unwrap()
}

/// Minimal polynomial of a square matrix, from the linear dependency of its powers.
pub fn minpoly(a: &Mat) -> Poly {
    let p = a.modulus();
    let n = a.rows();
    let mut e = crate::linalg::Echelon::new(p, n * n + 1);
    let mut powers: Vec<Vec<u64>> = Vec::new();
    let mut cur = Mat::identity(p, n);
    for k in 0..=n {
        let mut v = cur.data().to_vec();
        powers.push(v.clone());
        v.push(0);
        if !e.insert(v) {
            // Solve for the dependency among the collected powers.
            let cols: Vec<Vec<u64>> = powers[..k].to_vec();
            let basis = Mat::from_cols(p, n * n, &cols);
            let x = basis.solve(&Mat::from_cols(p, n * n, &[powers[k].clone()])).expect("shapes agree").expect("dependency exists");
            let mut c: Vec<u64> = x.col(0).iter().map(|v| (p - v) % p).collect();
            c.push(1);
            return Poly::new(p, c);
        }
        cur = cur.mul(a);
    }
    unreachable!("powers of an n x n matrix are dependent after n steps")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;

    fn random_poly(rng: &mut SplitMix64, p: u64, deg: usize) -> Poly {
        let mut c: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
        c.push(1);
        Poly::new(p, c)
    }

    #[test]
    fn divrem_identity() {
        let mut rng = SplitMix64::seed_from_u64(1);
        for p in [2, 3, 7] {
            for _ in 0..50 {
                let a = random_poly(&mut rng, p, 7);
                let b = random_poly(&mut rng, p, 3);
                let (q, r) = a.divrem(&b);
                assert_eq!(q.mul(&b).add(&r), a);
                assert!(r.degree().is_none_or(|d| d < 3));
            }
        }
    }

    #[test]
    fn factor_recombines() {
        let mut rng = SplitMix64::seed_from_u64(4);
        for p in [2, 3, 5] {
            for deg in 1..10 {
                let f = random_poly(&mut rng, p, deg);
                let fac = f.factor(&mut rng);
                let mut prod = Poly::one(p);
                for (g, m) in &fac {
                    assert!(g.is_irreducible(), "{g:?}");
                    for _ in 0..*m {
                        prod = prod.mul(g);
                    }
                }
                assert_eq!(prod, f.monic());
            }
        }
    }

    #[test]
    fn irreducibility_known_cases() {
        assert!(Poly::new(2, vec![1, 1, 1]).is_irreducible());
        assert!(!Poly::new(2, vec![1, 0, 1]).is_irreducible());
        assert!(Poly::new(3, vec![1, 0, 1]).is_irreducible());
        assert!(!Poly::new(5, vec![1, 0, 1]).is_irreducible());
        let f = Poly::new(2, vec![1, 0, 1]).mul(&Poly::new(2, vec![1, 1, 1]));
        let fac = f.factor(&mut SplitMix64::seed_from_u64(0));
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0], (Poly::new(2, vec![1, 1]), 2));
    }

    #[test]
    fn charpoly_cayley_hamilton() {
        let mut rng = SplitMix64::seed_from_u64(8);
        for p in [2, 3, 5] {
            for n in 1..7 {
                let a = Mat::from_vec(p, n, n, (0..n * n).map(|_| rng.gen_range(0..p)).collect());
                let cp = charpoly(&a);
                assert_eq!(cp.degree(), Some(n));
                assert!(cp.eval_mat(&a).is_zero());
                let mp = minpoly(&a);
                assert!(mp.eval_mat(&a).is_zero());
                assert!(cp.rem(&mp).is_zero());
            }
        }
    }
}
