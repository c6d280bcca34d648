//! Catalogs of indecomposables of `S_m(k[T]/T^n)` over `F_p`: enumeration,
//! iso-class deduplication, τ-orbit analysis, persistence and the named
//! verification cases.

use crate::ar::{
    factors_from, factors_through, relative_injective_kind, relative_projective_kind, same_indecomposable, sink_map_p, source_map_i, tau_orbit, tau_orbits,
    tau_s, tau_table, ArError, OrbitEnd,
};
use crate::exhibits;
use crate::hom::{fingerprint, hom_basis};
use crate::io::{IoError, RawObject};
use crate::krull::{decompose, end_radical, is_indecomposable, is_isomorphic, local_iso, DecomposeOptions};
use crate::rep::{random_extension, BoxDiagram, RepError, RepObject, Shape, StandardKind};
use crate::rng::{derive, seeded, Rng};
use crate::zpn::{verify_birkhoff_family, ZpnError};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::time::Instant;
use thiserror::Error;

/// Errors raised while building, analysing or storing catalogs.
#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("strategy {strategy} is not available for {shape}")]
    Unsupported { strategy: Strategy, shape: Shape },
    #[error("unknown verification case `{0}`")]
    UnknownCase(String),
    #[error("catalog file: {0}")]
    Format(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Ar(#[from] ArError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Zpn(#[from] ZpnError),
    #[error(transparent)]
    File(#[from] std::io::Error),
}

/// How a catalog is populated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// The explicit lists for `m = 1, 2`.
    ClosedForm,
    /// Decomposition of seeded random objects.
    Sampling,
    /// Closure of `P`, `I`, `Y` under `τ_S`.
    TauClosure,
    /// All of the above until no new class appears for a number of rounds.
    Combined,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::ClosedForm => "closed-form",
            Strategy::Sampling => "sampling",
            Strategy::TauClosure => "tau-closure",
            Strategy::Combined => "combined",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "closed-form" => Ok(Strategy::ClosedForm),
            "sampling" => Ok(Strategy::Sampling),
            "tau-closure" => Ok(Strategy::TauClosure),
            "combined" => Ok(Strategy::Combined),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

/// Parameters of [`enumerate`].
#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub strategy: Strategy,
    /// Maximum number of sampling rounds.
    pub budget: usize,
    /// Rounds without a new class after which sampling stops.
    pub stable_rounds: usize,
    pub seed: u64,
    pub max_columns: usize,
    pub max_generators: usize,
    /// Random objects decomposed per round.
    pub batch: usize,
    pub decompose: DecomposeOptions,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::Combined,
            budget: 5000,
            stable_rounds: 150,
            seed: 0,
            max_columns: 5,
            max_generators: 3,
            batch: 16,
            decompose: DecomposeOptions::default(),
        }
    }
}

/// One isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub representative: RepObject,
    pub fingerprint: Vec<usize>,
    /// Index of the τ-orbit, once orbits are analysed.
    pub orbit: Option<usize>,
    /// Whether the orbit avoids `P`, `I`, `Y`, once orbits are analysed.
    pub stable: Option<bool>,
    pub provenance: String,
}

/// A list of pairwise non-isomorphic certified indecomposables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub shape: Shape,
    pub seed: u64,
    pub strategy: Strategy,
    pub entries: Vec<CatalogEntry>,
    /// Whether the stopping rule was met within budget.
    pub complete: bool,
    pub rounds: usize,
    /// Summands that could not be certified and were skipped.
    pub unresolved: usize,
}

/// τ-orbit structure of a τ-closed catalog.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    /// Lengths of the stable orbits, ascending.
    pub stable_lengths: Vec<usize>,
    /// Non-stable orbits, listed along `τ^{-1}`.
    pub chains: Vec<Chain>,
}

/// A non-stable τ-orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub len: usize,
    pub has_p: bool,
    pub has_i: bool,
    pub has_y: bool,
}

impl OrbitSummary {
    /// The chain containing `P`.
    pub fn p_chain(&self) -> Option<&Chain> {
        self.chains.iter().find(|c| c.has_p)
    }

    /// Whether `Y` forms an orbit of its own.
    pub fn y_isolated(&self) -> bool {
        self.chains.iter().any(|c| c.has_y && c.len == 1)
    }
}

impl Catalog {
    pub fn new(shape: Shape, seed: u64, strategy: Strategy) -> Self {
        Self { shape, seed, strategy, entries: Vec::new(), complete: false, rounds: 0, unresolved: 0 }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn objects(&self) -> Vec<RepObject> {
        self.entries.iter().map(|e| e.representative.clone()).collect()
    }

    /// Index of the entry isomorphic to the indecomposable `x`.
    pub fn find(&self, x: &RepObject) -> Option<usize> {
        let f = fingerprint(x);
        self.entries.iter().position(|e| e.fingerprint == f && local_iso(&e.representative, x).is_some())
    }

    /// Adds a certified indecomposable unless its class is present; returns
    /// the index of a new entry.
    pub fn insert(&mut self, x: RepObject, provenance: &str) -> Option<usize> {
        if self.find(&x).is_some() {
            return None;
        }
        let fp = fingerprint(&x);
        self.entries.push(CatalogEntry { representative: x, fingerprint: fp, orbit: None, stable: None, provenance: provenance.to_string() });
        Some(self.entries.len() - 1)
    }

    /// Decomposes `x` and inserts the certified summands; returns the new indices.
    pub fn insert_summands(&mut self, x: &RepObject, provenance: &str, rng: &mut Rng, opts: &DecomposeOptions) -> Vec<usize> {
        if x.is_zero() {
            return Vec::new();
        }
        if is_indecomposable(x, rng, opts) == Some(true) {
            return self.insert(x.clone(), provenance).into_iter().collect();
        }
        let d = decompose(x, rng, opts);
        let mut pieces = d.pieces;
        pieces.sort_by(|a, b| a.fingerprint.cmp(&b.fingerprint));
        let mut out = Vec::new();
        for piece in pieces {
            if piece.status.is_certified() {
                out.extend(self.insert(piece.object, provenance));
            } else {
                self.unresolved += 1;
            }
        }
        out
    }

    /// Closes the catalog under `τ_S`, starting from the given entries.
    pub fn tau_close(&mut self, start: Vec<usize>, rng: &mut Rng, opts: &DecomposeOptions) -> Result<Vec<usize>, CatalogError> {
        let mut added = Vec::new();
        let mut work = start;
        while let Some(i) = work.pop() {
            let x = self.entries[i].representative.clone();
            if relative_projective_kind(&x).is_some() {
                continue;
            }
            let t = tau_s(&x)?;
            let new = self.insert_summands(&t, "tau-closure", rng, opts);
            added.extend(&new);
            work.extend(new);
        }
        Ok(added)
    }

    /// Computes τ-orbits and fills in the orbit fields of all entries.
    pub fn analyze(&mut self) -> Result<OrbitSummary, CatalogError> {
        let objs = self.objects();
        let tau = tau_table(&objs)?;
        let (orbit_of, orbits) = tau_orbits(&objs, &tau);
        for (i, e) in self.entries.iter_mut().enumerate() {
            e.orbit = Some(orbit_of[i]);
            e.stable = Some(orbits[orbit_of[i]].1);
        }
        let mut stable_lengths = Vec::new();
        let mut chains = Vec::new();
        for (members, stable) in &orbits {
            if *stable {
                stable_lengths.push(members.len());
            } else {
                let kinds: Vec<(Option<StandardKind>, Option<StandardKind>)> =
                    members.iter().map(|&c| (relative_projective_kind(&objs[c]), relative_injective_kind(&objs[c]))).collect();
                chains.push(Chain {
                    len: members.len(),
                    has_p: kinds.iter().any(|k| k.0 == Some(StandardKind::P)),
                    has_i: kinds.iter().any(|k| k.1 == Some(StandardKind::I)),
                    has_y: kinds.iter().any(|k| k.0 == Some(StandardKind::Y)),
                });
            }
        }
        stable_lengths.sort_unstable();
        Ok(OrbitSummary { stable_lengths, chains })
    }

    /// Writes the catalog as JSON lines: one header, then one line per entry.
    pub fn save(&self, path: &Path) -> Result<(), CatalogError> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut f)?;
        f.flush()?;
        Ok(())
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<(), CatalogError> {
        let header = Header {
            format: FORMAT.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            p: self.shape.p,
            m: self.shape.m,
            n: self.shape.n,
            seed: self.seed,
            strategy: self.strategy,
            complete: self.complete,
            rounds: self.rounds,
            unresolved: self.unresolved,
            entries: self.entries.len(),
        };
        writeln!(w, "{}", serde_json::to_string(&header).map_err(|e| CatalogError::Format(e.to_string()))?)?;
        for (index, e) in self.entries.iter().enumerate() {
            let line = EntryLine {
                index,
                object: RawObject::from_object(&e.representative),
                fingerprint: e.fingerprint.clone(),
                orbit: e.orbit,
                stable: e.stable,
                provenance: e.provenance.clone(),
            };
            writeln!(w, "{}", serde_json::to_string(&line).map_err(|e| CatalogError::Format(e.to_string()))?)?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        Self::read_from(f)
    }

    pub fn read_from(r: impl BufRead) -> Result<Catalog, CatalogError> {
        let mut lines = r.lines();
        let first = lines.next().ok_or_else(|| CatalogError::Format("empty file".into()))??;
        let h: Header = serde_json::from_str(&first).map_err(|e| CatalogError::Format(format!("header: {e}")))?;
        if h.format != FORMAT {
            return Err(CatalogError::Format(format!("unexpected format tag `{}`", h.format)));
        }
        let shape = Shape::new(h.p, h.m, h.n)?;
        let mut cat =
            Catalog { shape, seed: h.seed, strategy: h.strategy, entries: Vec::new(), complete: h.complete, rounds: h.rounds, unresolved: h.unresolved };
        for (k, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let e: EntryLine = serde_json::from_str(&line).map_err(|e| CatalogError::Format(format!("line {}: {e}", k + 2)))?;
            let o = &e.object;
            if (o.field, o.m, o.n) != (h.p, h.m, h.n) {
                return Err(CatalogError::Format(format!(
                    "line {}: entry lives in ({}, {}, {}) but the header says ({}, {}, {})",
                    k + 2,
                    o.field,
                    o.m,
                    o.n,
                    h.p,
                    h.m,
                    h.n
                )));
            }
            if e.index != cat.entries.len() {
                return Err(CatalogError::Format(format!("line {}: index {} out of sequence", k + 2, e.index)));
            }
            let x = o.to_object()?;
            if fingerprint(&x) != e.fingerprint {
                return Err(CatalogError::Format(format!("line {}: stored fingerprint does not match the object", k + 2)));
            }
            cat.entries.push(CatalogEntry { representative: x, fingerprint: e.fingerprint, orbit: e.orbit, stable: e.stable, provenance: e.provenance });
        }
        if cat.entries.len() != h.entries {
            return Err(CatalogError::Format(format!("header announces {} entries, found {}", h.entries, cat.entries.len())));
        }
        Ok(cat)
    }
}

const FORMAT: &str = "nilsub-catalog";

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: String,
    p: u64,
    m: usize,
    n: usize,
    seed: u64,
    strategy: Strategy,
    complete: bool,
    rounds: usize,
    unresolved: usize,
    entries: usize,
}

#[derive(Serialize, Deserialize)]
struct EntryLine {
    index: usize,
    object: RawObject,
    fingerprint: Vec<usize>,
    orbit: Option<usize>,
    stable: Option<bool>,
    provenance: String,
}

/// The explicit lists of indecomposables for `m = 1` and `m = 2`.
pub fn closed_form(shape: Shape) -> Result<Vec<RepObject>, CatalogError> {
    let (m, n) = (shape.m, shape.n);
    if m > 2 {
        return Err(CatalogError::Unsupported { strategy: Strategy::ClosedForm, shape });
    }
    let mut ds = Vec::new();
    for i in 1..=n {
        ds.push(BoxDiagram::from_triples(&[i], &[]));
        ds.push(BoxDiagram::from_triples(&[i], &[&[(1, i - 1, 1)]]));
    }
    if m == 2 {
        for i in 2..=n {
            ds.push(BoxDiagram::from_triples(&[i], &[&[(1, i - 2, 1)]]));
        }
        for i in 3..=n {
            for j in 1..=i - 2 {
                ds.push(BoxDiagram::from_triples(&[i, j], &[&[(1, i - 2, 1), (2, j - 1, 1)]]));
            }
        }
    }
    Ok(ds.iter().map(|d| RepObject::from_box_diagram(d, shape)).collect::<Result<_, _>>()?)
}

/// Builds a catalog for `shape` with the chosen strategy.
pub fn enumerate(shape: Shape, opts: &EnumerateOptions) -> Result<Catalog, CatalogError> {
    let mut rng = seeded(opts.seed);
    let dopts = &opts.decompose;
    let mut cat = Catalog::new(shape, opts.seed, opts.strategy);
    let standard = [StandardKind::P, StandardKind::I, StandardKind::Y].map(|k| RepObject::standard(k, shape));
    match opts.strategy {
        Strategy::ClosedForm => {
            for x in closed_form(shape)? {
                cat.insert(x, "closed-form");
            }
            cat.complete = true;
        }
        Strategy::TauClosure => {
            let seeds: Vec<usize> = standard.into_iter().filter_map(|x| cat.insert(x, "standard")).collect();
            cat.tau_close(seeds, &mut rng, dopts)?;
            cat.complete = true;
        }
        Strategy::Sampling | Strategy::Combined => {
            let closure = opts.strategy == Strategy::Combined;
            if closure {
                let mut seeds: Vec<usize> = standard.into_iter().filter_map(|x| cat.insert(x, "standard")).collect();
                if shape.m <= 2 {
                    seeds.extend(closed_form(shape)?.into_iter().filter_map(|x| cat.insert(x, "closed-form")));
                }
                cat.tau_close(seeds, &mut rng, dopts)?;
            }
            let mut quiet = 0;
            while quiet < opts.stable_rounds && cat.rounds < opts.budget {
                let round = cat.rounds as u64;
                cat.rounds += 1;
                let known = cat.objects();
                let (pieces, unresolved) = sample_round(shape, opts, round, &known);
                cat.unresolved += unresolved;
                let mut new = Vec::new();
                for (x, provenance) in pieces {
                    new.extend(cat.insert(x, &provenance));
                }
                if closure && !new.is_empty() {
                    let more = cat.tau_close(new.clone(), &mut rng, dopts)?;
                    new.extend(more);
                }
                quiet = if new.is_empty() { quiet + 1 } else { 0 };
            }
            cat.complete = quiet >= opts.stable_rounds;
        }
    }
    Ok(cat)
}

/// Certified indecomposable summands of one batch of random objects, sorted
/// by fingerprint, with the number of summands left uncertified. Samples
/// are drawn from seeds derived from the run seed and the round number, so
/// the result does not depend on how the batch is split across threads.
fn sample_round(shape: Shape, opts: &EnumerateOptions, round: u64, known: &[RepObject]) -> (Vec<(RepObject, String)>, usize) {
    let batch = opts.batch.max(1);
    let weights: Vec<f64> = known.iter().map(|x| x.dims()).map(|d| 1.0 / ((d.du + d.dv) as f64).powi(2)).collect();
    let small_pick = WeightedIndex::new(if weights.is_empty() { vec![1.0] } else { weights }).expect("positive weights");
    let one = |k: usize| -> (Vec<(RepObject, String)>, usize) {
        let id = round * batch as u64 + k as u64;
        let mut rng = seeded(derive(opts.seed, id));
        // Rotate between sparse box diagrams, generators in general position
        // and random extensions between classes found so far.
        let x = match k % 4 {
            0 => RepObject::random(&mut rng, shape, opts.max_columns, opts.max_generators),
            1 => RepObject::random_dense(&mut rng, shape, opts.max_columns, opts.max_generators),
            _ if known.is_empty() => RepObject::random(&mut rng, shape, opts.max_columns, opts.max_generators),
            _ => {
                // One end is drawn with weight falling off with its size.
                let small = &known[small_pick.sample(&mut rng)];
                let other = &known[rng.gen_range(0..known.len())];
                let (a, b) = if rng.gen_bool(0.5) { (small, other) } else { (other, small) };
                random_extension(a, b, &mut rng).expect("extensions of objects in one category are valid")
            }
        };
        let provenance = format!("sampling seed {} sample {id}", opts.seed);
        if is_indecomposable(&x, &mut rng, &opts.decompose) == Some(true) {
            return (vec![(x, provenance)], 0);
        }
        let d = decompose(&x, &mut rng, &opts.decompose);
        let mut out = Vec::new();
        let mut unresolved = 0;
        for piece in d.pieces {
            if piece.status.is_certified() {
                out.push((piece.object, provenance.clone()));
            } else {
                unresolved += 1;
            }
        }
        (out, unresolved)
    };
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(batch);
    let results: Vec<(Vec<(RepObject, String)>, usize)> = if threads <= 1 {
        (0..batch).map(one).collect()
    } else {
        let mut slots: Vec<Option<(Vec<(RepObject, String)>, usize)>> = vec![None; batch];
        std::thread::scope(|sc| {
            for (t, chunk) in slots.chunks_mut(batch.div_ceil(threads)).enumerate() {
                let one = &one;
                let base = t * batch.div_ceil(threads);
                sc.spawn(move || {
                    for (i, slot) in chunk.iter_mut().enumerate() {
                        *slot = Some(one(base + i));
                    }
                });
            }
        });
        slots.into_iter().map(|s| s.expect("every slot is filled")).collect()
    };
    let unresolved = results.iter().map(|r| r.1).sum();
    let mut pieces: Vec<(Vec<usize>, RepObject, String)> = results.into_iter().flat_map(|r| r.0).map(|(x, pv)| (fingerprint(&x), x, pv)).collect();
    pieces.sort_by(|a, b| a.0.cmp(&b.0));
    (pieces.into_iter().map(|(_, x, pv)| (x, pv)).collect(), unresolved)
}

/// One checked claim of a verification case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The outcome of a verification case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub p: u64,
    pub seed: u64,
    pub claims: Vec<Claim>,
    pub seconds: f64,
}

impl CaseReport {
    /// The conjunction of all claims.
    pub fn passed(&self) -> bool {
        !self.claims.is_empty() && self.claims.iter().all(|c| c.passed)
    }
}

/// Identifiers accepted by [`verify_case`].
pub const CASES: &[&str] =
    &["s1-counts", "s2-counts", "s3n5-orbits", "s3n6-orbits", "m-eq-n-minus-1", "s3n7-family", "s3n7-tubes", "s4n6-tubes", "layer-bridge", "sink-source"];

struct Claims(Vec<Claim>);

impl Claims {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(Claim { name: name.into(), passed, detail: detail.into() });
    }
}

fn shape(p: u64, m: usize, n: usize) -> Result<Shape, CatalogError> {
    Ok(Shape::new(p, m, n)?)
}

/// Combined enumeration with default options and the given seed.
pub fn standard_catalog(sh: Shape, seed: u64) -> Result<Catalog, CatalogError> {
    enumerate(sh, &EnumerateOptions { seed, ..EnumerateOptions::default() })
}

/// τ-period of an object, or `None` if the walk ends or exceeds `cap` steps.
fn period(x: &RepObject, cap: usize) -> Result<Option<usize>, CatalogError> {
    Ok(tau_orbit(x, cap)?.period())
}

/// `τ_S^k(x)` or `None` if a relatively projective object is reached first.
fn tau_power(x: &RepObject, k: usize) -> Result<Option<RepObject>, CatalogError> {
    let mut cur = x.clone();
    for _ in 0..k {
        if relative_projective_kind(&cur).is_some() {
            return Ok(None);
        }
        cur = tau_s(&cur)?;
    }
    Ok(Some(cur))
}

fn orbit_claims(c: &mut Claims, cat: &mut Catalog, count: usize, stable: &[usize], chain: usize) -> Result<(), CatalogError> {
    c.check("count", cat.len() == count && cat.complete, format!("{} classes (expected {count}), complete = {}", cat.len(), cat.complete));
    match cat.analyze() {
        Ok(s) => {
            c.check("stable orbit lengths", s.stable_lengths == stable, format!("{:?} (expected {stable:?})", s.stable_lengths));
            let pc = s.p_chain();
            c.check("P to I chain", pc.is_some_and(|pc| pc.has_i && pc.len == chain), format!("{:?} (expected length {chain} containing P and I)", pc));
            c.check("Y isolated", s.y_isolated(), format!("chains {:?}", s.chains));
        }
        Err(e) => c.check("τ-closed", false, e.to_string()),
    }
    Ok(())
}

/// Runs the named verification case.
pub fn verify_case(id: &str, p: u64, seed: u64) -> Result<CaseReport, CatalogError> {
    let start = Instant::now();
    let mut c = Claims(Vec::new());
    let mut rng = seeded(seed);
    let opts = DecomposeOptions::default();
    match id {
        "s1-counts" => {
            for n in 2..=6 {
                let cat = standard_catalog(shape(p, 1, n)?, seed)?;
                c.check(format!("S_1(k[T]/T^{n}) count"), cat.len() == 2 * n && cat.complete, format!("{} (expected {})", cat.len(), 2 * n));
            }
        }
        "s2-counts" => {
            for n in 3..=7 {
                let mut cat = standard_catalog(shape(p, 2, n)?, seed)?;
                let want = n * (n + 3) / 2;
                c.check(format!("S_2(k[T]/T^{n}) count"), cat.len() == want && cat.complete, format!("{} (expected {want})", cat.len()));
                if n <= 6 {
                    cat.analyze()?;
                    let mut bad = Vec::new();
                    for (i, e) in cat.entries.iter().enumerate() {
                        if e.stable == Some(true) {
                            let back = tau_power(&e.representative, n + 1)?;
                            if !back.is_some_and(|y| local_iso(&y, &e.representative).is_some()) {
                                bad.push(i);
                            }
                        }
                    }
                    c.check(format!("S_2(k[T]/T^{n}) τ^{} = id on stable entries", n + 1), bad.is_empty(), format!("failures at {bad:?}"));
                }
            }
        }
        "s3n5-orbits" => {
            let mut cat = standard_catalog(shape(p, 3, 5)?, seed)?;
            orbit_claims(&mut c, &mut cat, 37, &[5, 5, 5, 5, 10], 6)?;
        }
        "s3n6-orbits" => {
            let mut cat = standard_catalog(shape(p, 3, 6)?, seed)?;
            orbit_claims(&mut c, &mut cat, 84, &[10; 8], 3)?;
        }
        "m-eq-n-minus-1" => {
            let small = standard_catalog(shape(p, 3, 4)?, seed)?;
            let big = standard_catalog(shape(p, 4, 4)?, seed)?;
            let sh4 = shape(p, 4, 4)?;
            let mut matched = vec![false; big.len()];
            let mut missing = 0;
            for e in &small.entries {
                match big.find(&e.representative.with_shape(sh4)?) {
                    Some(j) => matched[j] = true,
                    None => missing += 1,
                }
            }
            let extra: Vec<usize> = (0..big.len()).filter(|&j| !matched[j]).collect();
            c.check("every S_3 entry lies in the S_4 catalog", missing == 0, format!("{missing} unmatched"));
            let proj_inj = extra.len() == 1 && {
                let x = &big.entries[extra[0]].representative;
                relative_projective_kind(x) == Some(StandardKind::P) && relative_injective_kind(x) == Some(StandardKind::I)
            };
            c.check(
                "exactly one extra entry, the projective-injective P = I",
                proj_inj,
                format!("S_3: {}, S_4: {}, extra {:?}", small.len(), big.len(), extra),
            );
        }
        "s3n7-family" => {
            let mut objs = Vec::new();
            for l in 0..p as i64 {
                objs.push((format!("A_{l}"), exhibits::a_lambda(p, l)?));
            }
            objs.push(("A_inf".to_string(), exhibits::a_infinity(p)?));
            let indec = objs.iter().filter(|(_, x)| is_indecomposable(x, &mut rng, &opts) == Some(true)).count();
            c.check("indecomposable", indec == objs.len(), format!("{indec} of {}", objs.len()));
            let mut same = Vec::new();
            for i in 0..objs.len() {
                for j in i + 1..objs.len() {
                    if !is_isomorphic(&objs[i].1, &objs[j].1, &mut rng, &opts)?.is_not_iso() {
                        same.push((objs[i].0.clone(), objs[j].0.clone()));
                    }
                }
            }
            c.check("pairwise non-isomorphic", same.is_empty(), format!("undistinguished {same:?}"));
            let minus_one = (p - 1) as i64;
            for l in 1..minus_one {
                let pr = period(&exhibits::a_lambda(p, l)?, 12)?;
                c.check(format!("τ_S A_{l} ≅ A_{l}"), pr == Some(1), format!("period {pr:?}"));
            }
            let pr0 = period(&exhibits::a_lambda(p, 0)?, 12)?;
            c.check("A_0 lies in the tube of circumference 3", pr0 == Some(3), format!("period {pr0:?}"));
            let am1 = exhibits::a_lambda(p, minus_one)?;
            let pr1 = period(&am1, 12)?;
            c.check("A_-1 lies in the tube of circumference 2", pr1 == Some(2), format!("period {pr1:?}"));
            let end = exhibits::a_chain_end(p)?;
            let iso = is_isomorphic(&am1, &end, &mut rng, &opts)?.is_iso();
            c.check("A_-1 is isomorphic to the end of the displayed chain", iso, String::new());
            let pri = period(&exhibits::a_infinity(p)?, 12)?;
            c.check("A_inf lies in the tube of circumference 5", pri == Some(5), format!("period {pri:?}"));
        }
        "s3n7-tubes" => {
            for (k, mouth) in [(5, exhibits::s3n7_tube5_mouth(p)?), (3, exhibits::s3n7_tube3_mouth(p)?), (2, exhibits::s3n7_tube2_mouth(p)?)] {
                let periods: Vec<Option<usize>> = mouth.iter().map(|x| period(x, 12)).collect::<Result<_, _>>()?;
                c.check(format!("tube of circumference {k}"), periods.iter().all(|&q| q == Some(k)), format!("periods {periods:?}"));
            }
        }
        "s4n6-tubes" => {
            let mouth = exhibits::s4n6_tube5_mouth(p)?;
            let periods: Vec<Option<usize>> = mouth.iter().map(|x| period(x, 12)).collect::<Result<_, _>>()?;
            c.check("tube of circumference 5", periods.iter().all(|&q| q == Some(5)), format!("periods {periods:?}"));
            let y = RepObject::standard(StandardKind::Y, shape(p, 4, 6)?);
            let rad_y = y.radical_power(1).object;
            let hit = mouth.iter().position(|x| same_indecomposable(x, &rad_y));
            c.check("Y is attached to the 5-tube: rad Y lies on its mouth", hit.is_some(), format!("mouth position {hit:?}"));
            let (b3, b2) = (exhibits::birkhoff(p, 1)?, exhibits::birkhoff(p, 0)?);
            let (q3, q2) = (period(&b3, 12)?, period(&b2, 12)?);
            c.check("tube of circumference 3", q3 == Some(3), format!("Birkhoff λ = 1 has period {q3:?}"));
            c.check("tube of circumference 2", q2 == Some(2), format!("Birkhoff λ = 0 has period {q2:?}"));
        }
        "layer-bridge" => {
            for q in [2u64, 3, 5] {
                let r = verify_birkhoff_family(q, &mut rng)?;
                c.check(format!("p = {q}"), r.passed(), format!("{r:?}"));
            }
        }
        "sink-source" => {
            let sh = shape(p, 3, 5)?;
            let cat = standard_catalog(sh, seed)?;
            c.check("catalog size", cat.len() == 37, format!("{}", cat.len()));
            let (w, sink) = sink_map_p(sh);
            let (q, source) = source_map_i(sh);
            let pobj = RepObject::standard(StandardKind::P, sh);
            let iobj = RepObject::standard(StandardKind::I, sh);
            let (mut into_p, mut from_i, mut fails) = (0, 0, Vec::new());
            for (k, e) in cat.entries.iter().enumerate() {
                let x = &e.representative;
                for f in non_isos(x, &pobj, &mut rng, &opts)? {
                    into_p += 1;
                    if !factors_through(x, &w, &sink, &f)? {
                        fails.push(format!("{k} -> P"));
                    }
                }
                for f in non_isos(&iobj, x, &mut rng, &opts)? {
                    from_i += 1;
                    if !factors_from(&q, x, &source, &f)? {
                        fails.push(format!("I -> {k}"));
                    }
                }
            }
            c.check("non-isomorphisms factor", fails.is_empty(), format!("{into_p} maps into P, {from_i} maps out of I, failures {fails:?}"));
        }
        _ => return Err(CatalogError::UnknownCase(id.to_string())),
    }
    Ok(CaseReport { id: id.to_string(), p, seed, claims: c.0, seconds: start.elapsed().as_secs_f64() })
}

/// A basis of the non-isomorphisms `x -> y` between indecomposables.
fn non_isos(x: &RepObject, y: &RepObject, rng: &mut Rng, opts: &DecomposeOptions) -> Result<Vec<crate::rep::Morphism>, CatalogError> {
    if local_iso(x, y).is_some() {
        let rad = end_radical(x, rng, opts).ok_or_else(|| RepError::Invalid("no radical certificate".into()))?;
        // Transport the radical of End(x) to Hom(x, y) through an isomorphism.
        let iso = local_iso(x, y).expect("checked above");
        return Ok(rad.iter().map(|r| iso.compose(r)).collect());
    }
    Ok(hom_basis(x, y)?.maps)
}

/// A short description of how an orbit walk ended.
pub fn describe_end(end: &OrbitEnd) -> String {
    match end {
        OrbitEnd::RelativeProjective(k) => format!("reaches relatively projective {k:?}"),
        OrbitEnd::Repeats { index, period } => format!("repeats with period {period} from member {index}"),
        OrbitEnd::Cap => "step cap reached".to_string(),
    }
}
