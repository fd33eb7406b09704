//! JSON file formats. Every rational is written as a canonical `"p/q"` or
//! `"p"` string; decimals are accepted on input.

use serde::{Deserialize, Serialize};

use mmlip_core::maps::{CompositionReport, Discretization};
use mmlip_core::rational::{self, Rational};
use mmlip_core::{Coupling, FiniteMMSpace, KyWitness, OrderWitness, PairSet, PointMap, Subset, TripleMeasure};

/// A malformed document: `field` locates the offending value.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{field}: {message}")]
pub struct FormatError {
    pub field: String,
    pub message: String,
}

impl FormatError {
    fn new(field: impl Into<String>, message: impl ToString) -> Self {
        Self {
            field: field.into(),
            message: message.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn parse_rat(field: impl FnOnce() -> String, text: &str) -> Result<Rational> {
    rational::parse(text).map_err(|e| FormatError::new(field(), e))
}

fn parse_vec(name: &str, items: &[String]) -> Result<Vec<Rational>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rat(|| format!("{name}[{i}]"), s))
        .collect()
}

fn parse_matrix(name: &str, rows: &[Vec<String>]) -> Result<Vec<Vec<Rational>>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| parse_rat(|| format!("{name}[{i}][{j}]"), s))
                .collect()
        })
        .collect()
}

fn fmt_vec(values: &[Rational]) -> Vec<String> {
    values.iter().map(rational::format).collect()
}

fn fmt_matrix(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| fmt_vec(r)).collect()
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| FormatError::new("document", e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub label: String,
    pub points: Vec<String>,
    pub dist: Vec<Vec<String>>,
    pub mass: Vec<String>,
}

impl SpaceDoc {
    pub fn from_space(space: &FiniteMMSpace) -> Self {
        Self {
            label: space.label().to_string(),
            points: space.points().to_vec(),
            dist: fmt_matrix(space.distances()),
            mass: fmt_vec(space.mass()),
        }
    }

    pub fn to_space(&self) -> Result<FiniteMMSpace> {
        let dist = parse_matrix("dist", &self.dist)?;
        let mass = parse_vec("mass", &self.mass)?;
        FiniteMMSpace::new(self.label.clone(), self.points.clone(), dist, mass).map_err(|e| FormatError::new(space_field(&e), e))
    }
}

fn space_field(err: &mmlip_core::Error) -> String {
    use mmlip_core::Error as E;
    match err {
        E::NegativeEntry { what, index } if *what == "mass" => format!("mass[{}]", index.0),
        E::NegativeEntry { index, .. } => format!("dist[{}][{}]", index.0, index.1),
        E::NonZeroDiagonal(i) => format!("dist[{i}][{i}]"),
        E::NonSymmetricMatrix(i, j) | E::ZeroDistance(i, j) => format!("dist[{i}][{j}]"),
        E::TriangleViolation(i, _, k) => format!("dist[{i}][{k}]"),
        E::MassNotOne(_) | E::NotCanonical(_) => "mass".into(),
        E::DimensionMismatch { what, .. } => (*what).into(),
        _ => "space".into(),
    }
}

pub fn parse_space(text: &str) -> Result<FiniteMMSpace> {
    from_json::<SpaceDoc>(text)?.to_space()
}

pub fn write_space(space: &FiniteMMSpace) -> String {
    to_json(&SpaceDoc::from_space(space))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingDoc {
    pub rows: usize,
    pub cols: usize,
    pub matrix: Vec<Vec<String>>,
}

impl CouplingDoc {
    pub fn from_coupling(c: &Coupling) -> Self {
        Self {
            rows: c.rows(),
            cols: c.cols(),
            matrix: fmt_matrix(c.matrix()),
        }
    }

    pub fn to_coupling(&self) -> Result<Coupling> {
        let matrix = parse_matrix("matrix", &self.matrix)?;
        if matrix.len() != self.rows || matrix.iter().any(|r| r.len() != self.cols) {
            return Err(FormatError::new("matrix", format!("expected a {}x{} matrix", self.rows, self.cols)));
        }
        Coupling::new(matrix).map_err(|e| FormatError::new("matrix", e))
    }
}

pub fn parse_coupling(text: &str) -> Result<Coupling> {
    from_json::<CouplingDoc>(text)?.to_coupling()
}

pub fn write_coupling(c: &Coupling) -> String {
    to_json(&CouplingDoc::from_coupling(c))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub epsilon: String,
    #[serde(rename = "S")]
    pub pairs: Vec<(usize, usize)>,
    pub coupling: CouplingDoc,
    pub dis: String,
    pub uncovered: String,
}

impl WitnessDoc {
    pub fn from_witness(w: &OrderWitness) -> Self {
        Self {
            epsilon: rational::format(&w.epsilon),
            pairs: w.pairs.iter().collect(),
            coupling: CouplingDoc::from_coupling(&w.coupling),
            dis: rational::format(&w.dis_value),
            uncovered: rational::format(&w.uncovered),
        }
    }

    pub fn to_witness(&self) -> Result<OrderWitness> {
        let coupling = self.coupling.to_coupling().map_err(|e| FormatError::new(format!("coupling.{}", e.field), e.message))?;
        let pairs = PairSet::new(coupling.rows(), coupling.cols(), self.pairs.iter().copied()).map_err(|e| FormatError::new("S", e))?;
        Ok(OrderWitness {
            epsilon: parse_rat(|| "epsilon".into(), &self.epsilon)?,
            pairs,
            coupling,
            dis_value: parse_rat(|| "dis".into(), &self.dis)?,
            uncovered: parse_rat(|| "uncovered".into(), &self.uncovered)?,
        })
    }
}

pub fn parse_witness(text: &str) -> Result<OrderWitness> {
    from_json::<WitnessDoc>(text)?.to_witness()
}

pub fn write_witness(w: &OrderWitness) -> String {
    to_json(&WitnessDoc::from_witness(w))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub domain: String,
    pub codomain: String,
    pub image: Vec<usize>,
}

impl MapDoc {
    pub fn from_map(f: &PointMap, domain: &FiniteMMSpace, codomain: &FiniteMMSpace) -> Self {
        Self {
            domain: domain.label().to_string(),
            codomain: codomain.label().to_string(),
            image: f.image().to_vec(),
        }
    }

    /// Checks the labels and sizes against the spaces the map is used with.
    pub fn to_map(&self, domain: &FiniteMMSpace, codomain: &FiniteMMSpace) -> Result<PointMap> {
        if self.domain != domain.label() {
            return Err(FormatError::new("domain", format!("expected {:?}, found {:?}", domain.label(), self.domain)));
        }
        if self.codomain != codomain.label() {
            return Err(FormatError::new("codomain", format!("expected {:?}, found {:?}", codomain.label(), self.codomain)));
        }
        if self.image.len() != domain.len() {
            return Err(FormatError::new("image", format!("expected {} entries, found {}", domain.len(), self.image.len())));
        }
        PointMap::new(self.image.clone(), codomain.len()).map_err(|e| FormatError::new("image", e))
    }
}

pub fn parse_map(text: &str, domain: &FiniteMMSpace, codomain: &FiniteMMSpace) -> Result<PointMap> {
    from_json::<MapDoc>(text)?.to_map(domain, codomain)
}

pub fn write_map(f: &PointMap, domain: &FiniteMMSpace, codomain: &FiniteMMSpace) -> String {
    to_json(&MapDoc::from_map(f, domain, codomain))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KyWitnessDoc {
    pub epsilon: String,
    pub map: MapDoc,
    pub domain_set: Vec<usize>,
}

pub fn write_ky_witness(w: &KyWitness, x: &FiniteMMSpace, y: &FiniteMMSpace) -> String {
    to_json(&KyWitnessDoc {
        epsilon: rational::format(&w.epsilon),
        map: MapDoc::from_map(&w.map, x, y),
        domain_set: w.domain_set.iter().collect(),
    })
}

pub fn parse_ky_witness(text: &str, x: &FiniteMMSpace, y: &FiniteMMSpace) -> Result<KyWitness> {
    let doc: KyWitnessDoc = from_json(text)?;
    Ok(KyWitness {
        epsilon: parse_rat(|| "epsilon".into(), &doc.epsilon)?,
        map: doc.map.to_map(x, y).map_err(|e| FormatError::new(format!("map.{}", e.field), e.message))?,
        domain_set: Subset::new(x.len(), doc.domain_set).map_err(|e| FormatError::new("domain_set", e))?,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleDoc {
    pub dims: (usize, usize, usize),
    pub tensor: Vec<Vec<Vec<String>>>,
}

pub fn write_triple(t: &TripleMeasure) -> String {
    to_json(&TripleDoc {
        dims: t.dims(),
        tensor: t.tensor().iter().map(|m| fmt_matrix(m)).collect(),
    })
}

/// One verified inequality: `lhs ≤ rhs` (or `lhs ≥ rhs` for masses).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundDoc {
    pub value: String,
    pub bound: String,
    pub holds: bool,
}

fn at_most(value: &Rational, bound: &Rational) -> BoundDoc {
    BoundDoc {
        value: rational::format(value),
        bound: rational::format(bound),
        holds: value <= bound,
    }
}

fn at_least(value: &Rational, bound: &Rational) -> BoundDoc {
    BoundDoc {
        value: rational::format(value),
        bound: rational::format(bound),
        holds: value >= bound,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompositionDoc {
    pub map: MapDoc,
    pub t: String,
    pub projection: Vec<usize>,
    pub constructed_set: Vec<usize>,
    pub domain_set: Vec<usize>,
    pub lipschitz_up_to: String,
    pub domain_mass: BoundDoc,
    pub prokhorov: BoundDoc,
}

pub fn write_composition(r: &CompositionReport, x: &FiniteMMSpace, z: &FiniteMMSpace) -> String {
    to_json(&CompositionDoc {
        map: MapDoc::from_map(&r.map, x, z),
        t: rational::format(&r.t),
        projection: r.projection.image().to_vec(),
        constructed_set: r.constructed_set.iter().collect(),
        domain_set: r.domain_set.iter().collect(),
        lipschitz_up_to: rational::format(&r.lip_bound),
        domain_mass: at_least(&r.domain_mass, &r.mass_bound),
        prokhorov: at_most(&r.prokhorov, &r.prokhorov_bound),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscretizationDoc {
    pub t: String,
    pub net: Vec<usize>,
    pub projection: Vec<usize>,
    pub prokhorov: BoundDoc,
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    pub box_value: Option<BoundDoc>,
    pub space: SpaceDoc,
}

pub fn write_discretization(d: &Discretization, box_value: Option<&Rational>) -> String {
    to_json(&DiscretizationDoc {
        t: rational::format(&d.t),
        net: d.net.iter().collect(),
        projection: d.projection.image().to_vec(),
        prokhorov: at_most(&d.prokhorov, &(&d.t / rational::int(2))),
        box_value: box_value.map(|b| at_most(b, &d.t)),
        space: SpaceDoc::from_space(&d.space),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mmlip_core::order::{unilateral_box, SearchBudget};
    use mmlip_core::rational::{int, rat};

    const TWO_POINTS: &str = r#"{"label":"A","points":["a","b"],"dist":[["0","0.5"],["1/2","0"]],"mass":["1/3","2/3"]}"#;

    #[test]
    fn space_round_trip() {
        let x = parse_space(TWO_POINTS).unwrap();
        assert_eq!(x.dist(0, 1), &rat(1, 2));
        let text = write_space(&x);
        assert!(text.contains("\"1/2\""));
        assert_eq!(parse_space(&text).unwrap(), x);
        assert_eq!(write_space(&parse_space(&text).unwrap()), text);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = TWO_POINTS.replace("\"1/3\"", "\"x\"");
        assert_eq!(parse_space(&bad).unwrap_err().field, "mass[0]");
        let asym = TWO_POINTS.replace(r#"["1/2","0"]"#, r#"["1/4","0"]"#);
        assert_eq!(parse_space(&asym).unwrap_err().field, "dist[0][1]");
        let light = TWO_POINTS.replace("\"2/3\"", "\"1/3\"");
        assert_eq!(parse_space(&light).unwrap_err().field, "mass");
        let tri = r#"{"label":"T","points":["a","b","c"],"dist":[["0","1","3"],["1","0","1"],["3","1","0"]],"mass":["1/3","1/3","1/3"]}"#;
        assert_eq!(parse_space(tri).unwrap_err().field, "dist[0][2]");
        assert_eq!(parse_space("{").unwrap_err().field, "document");
    }

    #[test]
    fn witness_round_trip_verifies() {
        let x = parse_space(TWO_POINTS).unwrap();
        let y = FiniteMMSpace::point("P");
        let (value, w) = unilateral_box(&x, &y, &SearchBudget::default()).unwrap();
        assert_eq!(value, int(0));
        let back = parse_witness(&write_witness(&w)).unwrap();
        assert_eq!(back, w);
        back.verify(&x, &y).unwrap();
    }

    #[test]
    fn map_labels_are_checked() {
        let x = parse_space(TWO_POINTS).unwrap();
        let y = FiniteMMSpace::point("P");
        let f = PointMap::constant(2, 0, 1).unwrap();
        let text = write_map(&f, &x, &y);
        assert_eq!(parse_map(&text, &x, &y).unwrap(), f);
        assert_eq!(parse_map(&text, &y, &y).unwrap_err().field, "domain");
    }
}
