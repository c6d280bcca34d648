//! Text formats for objects, graded objects and group embeddings.
//!
//! All three are TOML documents. An object file has keys `field`, `m`, `n`
//! and either the box form
//!
//! ```toml
//! field = 5
//! m = 3
//! n = 7
//! columns = [7, 6, 4, 3, 1]
//! generators = [[[1, 4, 1], [4, 1, 1], [5, 0, 1]], [[2, 3, 1], [3, 2, 1], [5, 0, 1]]]
//! ```
//!
//! where each term is `[column (1-based), exponent of T, coefficient]`, or the
//! raw form with `dimU`, `dimV` and row-major integer lists `alpha`
//! (`dimU × dimU`), `beta` (`dimV × dimV`) and `iota` (`dimV × dimU`).
//!
//! A graded file has `field`, `m`, `n`, `lo` and one `[[position]]` table per
//! degree `lo, lo+1, ...` holding `dimU`, `dimV`, `alpha`, `beta`, `iota` for
//! the maps leaving that degree; alternatively it uses the box form with an
//! extra `tops` list giving the degree of each column top.
//!
//! An embedding file has `p`, optional `e`, `orders` and `generators`
//! whose terms are `[column, p-exponent, coefficient]`.

use crate::covering::GradedRep;
use crate::linalg::Mat;
use crate::rep::{BoxDiagram, RepError, RepObject, Shape, Term};
use crate::zpn::{ZTerm, ZpnEmbedding, ZpnError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while reading or writing files.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot parse document: {0}")]
    Parse(String),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Zpn(#[from] ZpnError),
    #[error(transparent)]
    File(#[from] std::io::Error),
}

/// An object in raw matrix form; also the record stored in catalog files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawObject {
    pub field: u64,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "dimU")]
    pub dim_u: usize,
    #[serde(rename = "dimV")]
    pub dim_v: usize,
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub iota: Vec<i64>,
}

fn flat(m: &Mat) -> Vec<i64> {
    m.data().iter().map(|&x| x as i64).collect()
}

fn mat(p: u64, rows: usize, cols: usize, data: &[i64], name: &str) -> Result<Mat, IoError> {
    if data.len() != rows * cols {
        return Err(IoError::Invalid(format!("{name} has {} entries, expected {rows} x {cols} = {}", data.len(), rows * cols)));
    }
    Ok(Mat::from_i64(p, rows, cols, data))
}

impl RawObject {
    pub fn from_object(x: &RepObject) -> Self {
        Self { field: x.p(), m: x.m(), n: x.n(), dim_u: x.du(), dim_v: x.dv(), alpha: flat(x.alpha()), beta: flat(x.beta()), iota: flat(x.iota()) }
    }

    pub fn to_object(&self) -> Result<RepObject, IoError> {
        let s = Shape::new(self.field, self.m, self.n)?;
        let (u, v) = (self.dim_u, self.dim_v);
        let alpha = mat(s.p, u, u, &self.alpha, "alpha")?;
        let beta = mat(s.p, v, v, &self.beta, "beta")?;
        let iota = mat(s.p, v, u, &self.iota, "iota")?;
        Ok(RepObject::new(s, alpha, beta, iota)?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectDoc {
    field: u64,
    m: usize,
    n: usize,
    columns: Option<Vec<usize>>,
    generators: Option<Vec<Vec<(usize, usize, i64)>>>,
    tops: Option<Vec<i64>>,
    #[serde(rename = "dimU")]
    dim_u: Option<usize>,
    #[serde(rename = "dimV")]
    dim_v: Option<usize>,
    alpha: Option<Vec<i64>>,
    beta: Option<Vec<i64>>,
    iota: Option<Vec<i64>>,
    lo: Option<i64>,
    position: Option<Vec<PositionDoc>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PositionDoc {
    #[serde(rename = "dimU")]
    dim_u: usize,
    #[serde(rename = "dimV")]
    dim_v: usize,
    alpha: Vec<i64>,
    beta: Vec<i64>,
    iota: Vec<i64>,
}

fn parse_doc(text: &str) -> Result<ObjectDoc, IoError> {
    toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))
}

fn diagram(columns: Vec<usize>, generators: Vec<Vec<(usize, usize, i64)>>) -> BoxDiagram {
    let gens = generators.into_iter().map(|g| g.into_iter().map(|(c, e, k)| Term::new(c, e, k)).collect()).collect();
    BoxDiagram::new(columns, gens)
}

/// Parses an object file in box or raw form.
pub fn parse_object(text: &str) -> Result<RepObject, IoError> {
    let d = parse_doc(text)?;
    let shape = Shape::new(d.field, d.m, d.n)?;
    if d.tops.is_some() || d.position.is_some() || d.lo.is_some() {
        return Err(IoError::Invalid("graded keys in an object file".into()));
    }
    match (d.columns, d.dim_u) {
        (Some(columns), None) => {
            if d.alpha.is_some() || d.beta.is_some() || d.iota.is_some() || d.dim_v.is_some() {
                return Err(IoError::Invalid("box form mixed with raw keys".into()));
            }
            let x = RepObject::from_box_diagram(&diagram(columns, d.generators.unwrap_or_default()), shape)?;
            Ok(x)
        }
        (None, Some(dim_u)) => {
            let missing = |k: &str| IoError::Invalid(format!("raw form needs `{k}`"));
            if d.generators.is_some() {
                return Err(IoError::Invalid("raw form mixed with generators".into()));
            }
            RawObject {
                field: d.field,
                m: d.m,
                n: d.n,
                dim_u,
                dim_v: d.dim_v.ok_or_else(|| missing("dimV"))?,
                alpha: d.alpha.ok_or_else(|| missing("alpha"))?,
                beta: d.beta.ok_or_else(|| missing("beta"))?,
                iota: d.iota.ok_or_else(|| missing("iota"))?,
            }
            .to_object()
        }
        (Some(_), Some(_)) => Err(IoError::Invalid("both box and raw forms given".into())),
        (None, None) => Err(IoError::Invalid("need either `columns` or `dimU`".into())),
    }
}

/// Writes an object in raw form.
pub fn write_object(x: &RepObject) -> String {
    toml::to_string(&RawObject::from_object(x)).expect("raw objects serialize")
}

/// Writes a box diagram as an object file.
pub fn write_box(d: &BoxDiagram, shape: Shape) -> String {
    #[derive(Serialize)]
    struct BoxDoc {
        field: u64,
        m: usize,
        n: usize,
        columns: Vec<usize>,
        generators: Vec<Vec<(usize, usize, i64)>>,
    }
    let doc = BoxDoc {
        field: shape.p,
        m: shape.m,
        n: shape.n,
        columns: d.columns.clone(),
        generators: d.generators.iter().map(|g| g.iter().map(|t| (t.col, t.exp, t.coeff)).collect()).collect(),
    };
    toml::to_string(&doc).expect("box diagrams serialize")
}

/// Parses a graded object file.
pub fn parse_graded(text: &str) -> Result<GradedRep, IoError> {
    let d = parse_doc(text)?;
    let shape = Shape::new(d.field, d.m, d.n)?;
    if let Some(columns) = d.columns {
        let tops = d.tops.ok_or_else(|| IoError::Invalid("graded box form needs `tops`".into()))?;
        return Ok(GradedRep::from_box_diagram(&diagram(columns, d.generators.unwrap_or_default()), &tops, shape)?);
    }
    let positions = d.position.ok_or_else(|| IoError::Invalid("need `[[position]]` tables or `columns` with `tops`".into()))?;
    let lo = d.lo.unwrap_or(0);
    let p = shape.p;
    let mut beta = Vec::new();
    let mut alpha = Vec::new();
    let mut iota = Vec::new();
    for (k, pos) in positions.iter().enumerate() {
        let (pu, pv) = if k == 0 { (0, 0) } else { (positions[k - 1].dim_u, positions[k - 1].dim_v) };
        alpha.push(mat(p, pu, pos.dim_u, &pos.alpha, "alpha")?);
        beta.push(mat(p, pv, pos.dim_v, &pos.beta, "beta")?);
        iota.push(mat(p, pos.dim_v, pos.dim_u, &pos.iota, "iota")?);
    }
    Ok(GradedRep::new(shape, lo, beta, alpha, iota)?)
}

/// Writes a graded object with one `[[position]]` table per degree.
pub fn write_graded(g: &GradedRep) -> String {
    #[derive(Serialize)]
    struct GradedDoc {
        field: u64,
        m: usize,
        n: usize,
        lo: i64,
        position: Vec<PositionDoc>,
    }
    let position = (0..g.len())
        .map(|k| PositionDoc { dim_u: g.iota[k].cols(), dim_v: g.iota[k].rows(), alpha: flat(&g.alpha[k]), beta: flat(&g.beta[k]), iota: flat(&g.iota[k]) })
        .collect();
    let doc = GradedDoc { field: g.shape.p, m: g.shape.m, n: g.shape.n, lo: g.lo, position };
    toml::to_string(&doc).expect("graded objects serialize")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingDoc {
    p: u64,
    e: Option<u32>,
    orders: Vec<u32>,
    #[serde(default)]
    generators: Vec<Vec<(usize, u32, i64)>>,
}

/// Parses an embedding file.
pub fn parse_embedding(text: &str) -> Result<ZpnEmbedding, IoError> {
    let d: EmbeddingDoc = toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    let gens: Vec<Vec<ZTerm>> = d.generators.iter().map(|g| g.iter().map(|&(c, x, k)| ZTerm::new(c, x, k)).collect()).collect();
    let emb = ZpnEmbedding::new(d.p, &d.orders, &gens)?;
    if let Some(e) = d.e {
        if e != emb.e {
            return Err(IoError::Invalid(format!("declared e = {e} but the largest column order is {}", emb.e)));
        }
    }
    Ok(emb)
}

/// Reads a file into a string.
pub fn read(path: &std::path::Path) -> Result<String, IoError> {
    Ok(std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exhibits;
    use crate::rep::StandardKind;

    #[test]
    fn box_and_raw_forms_round_trip() {
        let a = exhibits::a_lambda(5, 2).unwrap();
        let text = write_box(&exhibits::a_lambda_diagram(2), Shape::new(5, 3, 7).unwrap());
        assert_eq!(parse_object(&text).unwrap(), a);
        let raw = write_object(&a);
        assert_eq!(parse_object(&raw).unwrap(), a);
        assert!(raw.contains("dimU = 7"));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(matches!(parse_object("field = 4\nm = 1\nn = 2\ncolumns = [1]"), Err(IoError::Rep(_))));
        assert!(matches!(parse_object("field = 2\nm = 1\nn = 2"), Err(IoError::Invalid(_))));
        assert!(matches!(parse_object("field = 2\nm = 1\nn = 2\ncolumns = [1"), Err(IoError::Parse(_))));
        assert!(matches!(parse_object("field = 2\nm = 1\nn = 2\ndimU = 1\ndimV = 1\nalpha = [0]\nbeta = [0]\niota = [1, 0]"), Err(IoError::Invalid(_))));
        assert!(matches!(parse_object("field = 2\nm = 1\nn = 2\ncolumns = [1]\nbogus = 1"), Err(IoError::Parse(_))));
        // alpha not nilpotent
        assert!(parse_object("field = 2\nm = 1\nn = 2\ndimU = 1\ndimV = 1\nalpha = [1]\nbeta = [1]\niota = [1]").is_err());
    }

    #[test]
    fn graded_round_trip() {
        let s = Shape::new(3, 2, 4).unwrap();
        let g = GradedRep::standard(StandardKind::I, s, 2);
        let text = write_graded(&g);
        assert_eq!(parse_graded(&text).unwrap(), g);
        let boxed = "field = 3\nm = 2\nn = 4\ncolumns = [4]\ntops = [2]\ngenerators = [[[1, 2, 1]]]\n";
        assert_eq!(parse_graded(boxed).unwrap(), g);
    }

    #[test]
    fn embedding_files() {
        let text = "p = 5\ne = 7\norders = [7, 6, 4, 3, 1]\ngenerators = [[[1, 4, 1], [4, 1, 1], [5, 0, 1]], [[2, 3, 1], [3, 2, 1], [5, 0, 1]], [[3, 3, 1], [4, 2, 2]]]\n";
        assert_eq!(parse_embedding(text).unwrap(), crate::zpn::c_lambda(5, 2).unwrap());
        assert!(parse_embedding("p = 5\ne = 6\norders = [7]\n").is_err());
    }
}
