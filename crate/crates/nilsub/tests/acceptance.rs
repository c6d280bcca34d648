//! Acceptance suite: one PASS/FAIL line per criterion, with supporting
//! detail lines indented beneath it. Exits nonzero if any criterion fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use nilsub::ar::{relative_projective_kind, tau_s};
use nilsub::catalog::{standard_catalog, verify_case, CaseReport, Catalog};
use nilsub::covering::{hom_formula_check, GradedRep};
use nilsub::exhibits;
use nilsub::hom::hom_basis;
use nilsub::krull::{decompose, is_isomorphic, local_iso, DecomposeOptions};
use nilsub::linalg::Mat;
use nilsub::rep::{RepObject, Shape};
use nilsub::rng::{derive, seeded, Rng};
use rand::Rng as _;

/// Seed for every randomized step of the suite.
const SEED: u64 = 0;
/// Wall-clock limit for a single enumeration.
const CASE_BUDGET: Duration = Duration::from_secs(300);
/// Graded pairs per shape for the covering formula.
const GRADED_PAIRS: usize = 200;
/// Shapes `(m, n)` for the covering formula.
const GRADED_SHAPES: [(usize, usize); 3] = [(1, 3), (2, 4), (3, 6)];
/// Largest `dim U + dim V`, summed over both objects, in the exhaustive Hom check.
const MAX_PAIR_DIM: usize = 6;
/// Random objects per finite case for the Krull-Schmidt check.
const KS_OBJECTS: usize = 500;
/// Finite cases `(m, n)` for the Krull-Schmidt check.
const KS_SHAPES: [(usize, usize); 5] = [(1, 6), (2, 7), (3, 5), (3, 6), (4, 4)];

struct Report {
    failed: Vec<usize>,
}

impl Report {
    fn criterion(&mut self, id: usize, title: &str, lines: Vec<(bool, String)>, seconds: f64) {
        let ok = !lines.is_empty() && lines.iter().all(|(p, _)| *p);
        println!("{} criterion {id}: {title} ({seconds:.1}s)", if ok { "PASS" } else { "FAIL" });
        for (p, text) in lines {
            println!("    {} {text}", if p { "ok  " } else { "FAIL" });
        }
        if !ok {
            self.failed.push(id);
        }
    }
}

fn shape(p: u64, m: usize, n: usize) -> Shape {
    Shape::new(p, m, n).expect("valid shape")
}

fn case_lines(r: Result<CaseReport, impl std::fmt::Display>) -> Vec<(bool, String)> {
    match r {
        Ok(r) => r.claims.iter().map(|c| (c.passed, format!("[{} p = {}] {}: {}", r.id, r.p, c.name, c.detail))).collect(),
        Err(e) => vec![(false, format!("error: {e}"))],
    }
}

/// `τ_S^k(x)`, or `None` if a relatively projective object is reached first.
fn tau_power(x: &RepObject, k: usize) -> Option<RepObject> {
    let mut cur = x.clone();
    for _ in 0..k {
        if relative_projective_kind(&cur).is_some() {
            return None;
        }
        cur = tau_s(&cur).ok()?;
    }
    Some(cur)
}

/// Catalogs used by the count and orbit criteria, with their enumeration time.
struct Catalogs {
    entries: Vec<(u64, usize, usize, Catalog, Duration)>,
}

impl Catalogs {
    fn build() -> Self {
        let mut entries = Vec::new();
        for p in [2, 3] {
            let mut cases: Vec<(usize, usize)> = (2..=6).map(|n| (1, n)).collect();
            cases.extend((3..=7).map(|n| (2, n)));
            cases.extend([(3, 5), (3, 6)]);
            for (m, n) in cases {
                let t = Instant::now();
                let cat = standard_catalog(shape(p, m, n), SEED).expect("enumeration runs");
                entries.push((p, m, n, cat, t.elapsed()));
            }
        }
        Self { entries }
    }

    fn get(&mut self, p: u64, m: usize, n: usize) -> &mut Catalog {
        &mut self.entries.iter_mut().find(|e| (e.0, e.1, e.2) == (p, m, n)).expect("catalog was built").3
    }
}

fn criterion_counts(cats: &Catalogs) -> Vec<(bool, String)> {
    cats.entries
        .iter()
        .map(|(p, m, n, cat, t)| {
            let want = match (m, n) {
                (1, n) => 2 * n,
                (2, n) => n * (n + 3) / 2,
                (3, 5) => 37,
                (3, 6) => 84,
                _ => unreachable!(),
            };
            let ok = cat.len() == want && cat.complete && *t <= CASE_BUDGET;
            (ok, format!("S_{m}(k[T]/T^{n}) over F_{p}: {} classes (expected {want}), complete = {}, {:.1}s", cat.len(), cat.complete, t.as_secs_f64()))
        })
        .collect()
}

fn criterion_orbits(cats: &mut Catalogs) -> Vec<(bool, String)> {
    let mut lines = Vec::new();
    for p in [2, 3] {
        for (n, count, stable, chain) in [(5, 37, vec![5, 5, 5, 5, 10], 6), (6, 84, vec![10; 8], 3)] {
            let cat = cats.get(p, 3, n);
            let len = cat.len();
            match cat.analyze() {
                Ok(s) => {
                    lines.push((
                        s.stable_lengths == stable,
                        format!("S_3(k[T]/T^{n}) over F_{p}: stable orbit lengths {:?} (expected {stable:?})", s.stable_lengths),
                    ));
                    let pc = s.p_chain().cloned();
                    lines.push((
                        pc.as_ref().is_some_and(|c| c.has_i && c.len == chain),
                        format!("S_3(k[T]/T^{n}) over F_{p}: P to I chain {pc:?} (expected length {chain})"),
                    ));
                    lines.push((s.y_isolated(), format!("S_3(k[T]/T^{n}) over F_{p}: Y isolated")));
                    lines.push((len == count, format!("S_3(k[T]/T^{n}) over F_{p}: total {len} (expected {count})")));
                }
                Err(e) => lines.push((false, format!("S_3(k[T]/T^{n}) over F_{p}: {e}"))),
            }
        }
        let (x1, x2) = (exhibits::x1(p).expect("X1"), exhibits::x2(p).expect("X2"));
        let t5 = tau_power(&x1, 5);
        lines.push((t5.is_some_and(|y| local_iso(&y, &x2).is_some()), format!("S_3(k[T]/T^6) over F_{p}: τ^5 X1 ≅ X2")));
        for n in 3..=6 {
            let cat = cats.get(p, 2, n);
            if let Err(e) = cat.analyze() {
                lines.push((false, format!("S_2(k[T]/T^{n}) over F_{p}: {e}")));
                continue;
            }
            let stable: Vec<&RepObject> = cat.entries.iter().filter(|e| e.stable == Some(true)).map(|e| &e.representative).collect();
            let bad = stable.iter().filter(|x| !tau_power(x, n + 1).is_some_and(|y| local_iso(&y, x).is_some())).count();
            lines.push((bad == 0, format!("S_2(k[T]/T^{n}) over F_{p}: τ^{} ≅ id on {} stable entries, {bad} failures", n + 1, stable.len())));
        }
    }
    lines
}

fn criterion_graded() -> Vec<(bool, String)> {
    let mut lines = Vec::new();
    for (k, (m, n)) in GRADED_SHAPES.into_iter().enumerate() {
        let sh = shape(2, m, n);
        let mut fails = 0;
        let mut nonzero = 0;
        for i in 0..GRADED_PAIRS {
            let mut rng = seeded(derive(SEED, (k * GRADED_PAIRS + i) as u64));
            let a = GradedRep::random(&mut rng, sh, 3, 2, 3);
            let b = GradedRep::random(&mut rng, sh, 3, 2, 3);
            match hom_formula_check(&a, &b) {
                Ok(r) => {
                    fails += usize::from(!r.holds());
                    nonzero += usize::from(r.left > 0);
                }
                Err(_) => fails += 1,
            }
        }
        lines.push((fails == 0, format!("(m, n) = ({m}, {n}): {GRADED_PAIRS} pairs, {nonzero} with nonzero Hom, {fails} failures")));
    }
    lines
}

/// Nilpotent Jordan matrix with blocks of the given sizes.
fn jordan(p: u64, parts: &[usize]) -> Mat {
    let d: usize = parts.iter().sum();
    let mut m = Mat::zeros(p, d, d);
    let mut off = 0;
    for &s in parts {
        for i in 0..s.saturating_sub(1) {
            m = m.with(off + i, off + i + 1, 1);
        }
        off += s;
    }
    m
}

fn partitions(d: usize, max: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(d)).rev() {
        for mut rest in partitions(d - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn random_invertible(rng: &mut Rng, p: u64, d: usize) -> Mat {
    loop {
        let data = (0..d * d).map(|_| rng.gen_range(0..p)).collect();
        let m = Mat::from_vec(p, d, d, data);
        if m.is_invertible() {
            return m;
        }
    }
}

/// One object per invariant subspace of each nilpotent Jordan matrix, with
/// `dim U + dim V <= max_dim`, presented in a random basis.
fn small_objects(sh: Shape, max_dim: usize, rng: &mut Rng) -> Vec<RepObject> {
    let p = sh.p;
    let mut out = Vec::new();
    for dv in 1..max_dim {
        for parts in partitions(dv, sh.n) {
            let beta = jordan(p, &parts);
            for du in 0..=dv.min(max_dim - dv) {
                let mut seen = HashSet::new();
                let total = (p as usize).pow((du * dv) as u32);
                for code in 0..total {
                    let mut c = code;
                    let data: Vec<u64> = (0..du * dv)
                        .map(|_| {
                            let v = (c % p as usize) as u64;
                            c /= p as usize;
                            v
                        })
                        .collect();
                    let u = Mat::from_vec(p, dv, du, data);
                    if u.rank() != du {
                        continue;
                    }
                    let key = u.transpose().echelon().0;
                    if !seen.insert(key) {
                        continue;
                    }
                    if u.hstack(&beta.mul(&u)).rank() != du {
                        continue;
                    }
                    let x = RepObject::subspace_object(sh, beta.clone(), u.clone());
                    if !x.validate().violations.is_empty() {
                        continue;
                    }
                    let (a, b) = (random_invertible(rng, p, du), random_invertible(rng, p, dv));
                    out.push(x.conjugate(&a, &b));
                }
            }
        }
    }
    out
}

/// Counts every pair `(g, h)` of matrices that is a morphism `x -> y`.
fn brute_force_hom_count(x: &RepObject, y: &RepObject) -> usize {
    let p = x.p();
    let (gr, gc, hr, hc) = (y.du(), x.du(), y.dv(), x.dv());
    let (ng, nh) = (gr * gc, hr * hc);
    let digits = |mut c: usize, len: usize| -> Vec<u64> {
        (0..len)
            .map(|_| {
                let v = (c % p as usize) as u64;
                c /= p as usize;
                v
            })
            .collect()
    };
    let mut count = 0;
    for ch in 0..(p as usize).pow(nh as u32) {
        let h = Mat::from_vec(p, hr, hc, digits(ch, nh));
        if h.mul(x.beta()) != y.beta().mul(&h) {
            continue;
        }
        for cg in 0..(p as usize).pow(ng as u32) {
            let g = Mat::from_vec(p, gr, gc, digits(cg, ng));
            if y.iota().mul(&g) == h.mul(x.iota()) && g.mul(x.alpha()) == y.alpha().mul(&g) {
                count += 1;
            }
        }
    }
    count
}

fn criterion_oracle() -> Vec<(bool, String)> {
    let mut lines = Vec::new();
    let mut rng = seeded(derive(SEED, 8));
    for n in 1..=MAX_PAIR_DIM - 1 {
        for m in 1..=n {
            let sh = shape(2, m, n);
            let objs = small_objects(sh, MAX_PAIR_DIM - 1, &mut rng);
            let size = |x: &RepObject| x.du() + x.dv();
            let (mut pairs, mut fails) = (0, 0);
            for x in &objs {
                for y in objs.iter().filter(|y| size(x) + size(y) <= MAX_PAIR_DIM) {
                    pairs += 1;
                    let brute = brute_force_hom_count(x, y);
                    let solver = hom_basis(x, y).map(|h| 1usize << h.dim()).unwrap_or(0);
                    fails += usize::from(brute != solver);
                }
            }
            lines.push((fails == 0, format!("S_{m}(k[T]/T^{n}) over F_2: {} objects, {pairs} pairs, {fails} disagreements", objs.len())));
        }
    }
    lines
}

/// Matches two lists of indecomposables up to isomorphism.
fn same_multiset(a: &[RepObject], b: &[RepObject]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| match (0..b.len()).find(|&j| !used[j] && local_iso(x, &b[j]).is_some()) {
        Some(j) => {
            used[j] = true;
            true
        }
        None => false,
    })
}

fn criterion_krull_schmidt() -> Vec<(bool, String)> {
    let opts = DecomposeOptions::default();
    let mut lines = Vec::new();
    for (k, (m, n)) in KS_SHAPES.into_iter().enumerate() {
        let sh = shape(2, m, n);
        let (mut uncertified, mut mismatched, mut not_iso, mut pieces) = (0, 0, 0, 0);
        for i in 0..KS_OBJECTS {
            let id = (k * KS_OBJECTS + i) as u64;
            let mut rng = seeded(derive(SEED, id));
            let x = if i % 2 == 0 { RepObject::random(&mut rng, sh, 5, 3) } else { RepObject::random_dense(&mut rng, sh, 5, 3) };
            let d1 = decompose(&x, &mut seeded(derive(SEED ^ 0x5eed, id)), &opts);
            let d2 = decompose(&x, &mut seeded(derive(SEED ^ 0xface, id)), &opts);
            if !d1.is_complete() || !d2.is_complete() {
                uncertified += 1;
                continue;
            }
            pieces += d1.pieces.len();
            let p1: Vec<RepObject> = d1.pieces.iter().map(|p| p.object.clone()).collect();
            let p2: Vec<RepObject> = d2.pieces.iter().map(|p| p.object.clone()).collect();
            mismatched += usize::from(!same_multiset(&p1, &p2));
            let sum = RepObject::sum_all(sh, &p1).expect("summands share a shape");
            let iso = is_isomorphic(&sum, &x, &mut rng, &opts).map(|r| r.is_iso()).unwrap_or(false);
            not_iso += usize::from(!iso);
        }
        lines.push((
            uncertified + mismatched + not_iso == 0,
            format!(
                "S_{m}(k[T]/T^{n}) over F_2: {KS_OBJECTS} objects, {pieces} summands, {uncertified} uncertified, {mismatched} multiset mismatches, {not_iso} sums not isomorphic"
            ),
        ));
    }
    lines
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_secs_f64())
}

fn main() {
    let mut report = Report { failed: Vec::new() };
    let (mut cats, build) = timed(Catalogs::build);

    report.criterion(1, "exact counts over F_2 and F_3", criterion_counts(&cats), build);
    let (lines, s) = timed(|| criterion_orbits(&mut cats));
    report.criterion(2, "orbit structure", lines, s);

    let (lines, s) = timed(|| [2, 3].into_iter().flat_map(|p| case_lines(verify_case("m-eq-n-minus-1", p, SEED))).collect());
    report.criterion(3, "deleting the projective-injective for m = n - 1", lines, s);

    let (lines, s) = timed(|| case_lines(verify_case("s3n7-family", 5, SEED)));
    report.criterion(4, "the λ-family in S_3(k[T]/T^7) over F_5", lines, s);

    let (lines, s) = timed(|| ["s3n7-tubes", "s4n6-tubes"].into_iter().flat_map(|c| case_lines(verify_case(c, 5, SEED))).collect());
    report.criterion(5, "tube periods over F_5", lines, s);

    let (lines, s) = timed(criterion_graded);
    report.criterion(6, "covering Hom formula", lines, s);

    let (lines, s) = timed(|| case_lines(verify_case("layer-bridge", 2, SEED)));
    report.criterion(7, "layer functor images of C_λ", lines, s);

    let (lines, s) = timed(criterion_oracle);
    report.criterion(8, "Hom solver against exhaustive enumeration", lines, s);

    let (lines, s) = timed(criterion_krull_schmidt);
    report.criterion(9, "Krull-Schmidt robustness", lines, s);

    let (lines, s) = timed(|| [2, 3].into_iter().flat_map(|p| case_lines(verify_case("sink-source", p, SEED))).collect());
    report.criterion(10, "sink map into P and source map out of I in S_3(k[T]/T^5)", lines, s);

    if report.failed.is_empty() {
        println!("acceptance: all 10 criteria passed");
    } else {
        println!("acceptance: failed criteria {:?}", report.failed);
        std::process::exit(1);
    }
}
