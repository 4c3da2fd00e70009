//! Text interchange formats for the command-line pipeline.
//!
//! Every document is a JSON object with a `version`, a `field` descriptor
//! ("2", "3", …, or "Q"), and a `kind` tag. Collections are kept in
//! canonical order at construction (covers sorted, upsets by minimal
//! generators, downsets by maximal cogenerators, scalar entries as
//! strings), so serialization is deterministic and identical invocations
//! produce identical bytes.

use crate::encoding::Encoding;
use crate::filtration::MultiFiltration;
use crate::indicator::{MonomialMatrix, Region};
use crate::linalg::{Field, LinalgError, Matrix};
use crate::module::{ModuleError, PosetModule};
use crate::poset::{ElemSet, FinitePoset, GridPoset, PosetError, PosetMorphism};
use crate::resolve::{Direction, IndicatorComplex};
use crate::zn::{BoxModule, FaceKind, FaceLabel};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn schema(path: &str, message: impl Into<String>) -> IoError {
    IoError::Schema { path: path.to_string(), message: message.into() }
}

/// Top-level interchange document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Document {
    pub version: u32,
    pub field: String,
    #[serde(flatten)]
    pub payload: Payload,
}

impl Document {
    pub fn new(field: Field, payload: Payload) -> Document {
        Document { version: FORMAT_VERSION, field: field.to_string(), payload }
    }

    pub fn field(&self) -> Result<Field, IoError> {
        self.field.parse().map_err(|_| schema("field", format!("bad field {:?}", self.field)))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Poset(PosetDoc),
    Module(ModuleDoc),
    Morphism(MorphismDoc),
    Encoding(EncodingDoc),
    Filtration(FiltrationDoc),
    MonomialMatrix(MonomialMatrixDoc),
    Complex(ComplexDoc),
    Certificate(CertificateDoc),
    HomTable(HomTableDoc),
    RankTable(RankTableDoc),
}

impl Payload {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Payload::Poset(_) => "poset",
            Payload::Module(_) => "module",
            Payload::Morphism(_) => "morphism",
            Payload::Encoding(_) => "encoding",
            Payload::Filtration(_) => "filtration",
            Payload::MonomialMatrix(_) => "monomial-matrix",
            Payload::Complex(_) => "complex",
            Payload::Certificate(_) => "certificate",
            Payload::HomTable(_) => "hom-table",
            Payload::RankTable(_) => "rank-table",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PosetDoc {
    pub n: usize,
    pub covers: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// named upset family (input to `uptight`)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upsets: Option<Vec<UpsetDoc>>,
    /// uptight output: element members per region of the source poset
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regions: Option<Vec<Vec<usize>>>,
    /// uptight output: the raw (pre-closure) relation
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_relation: Option<RawRelationDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct UpsetDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub generators: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RawRelationDoc {
    pub edges: Vec<(usize, usize)>,
    pub transitive: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridDoc {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EdgeDoc {
    pub from: usize,
    pub to: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModuleDoc {
    pub poset: PosetDoc,
    pub dims: Vec<usize>,
    pub edges: Vec<EdgeDoc>,
    /// present when the poset is a grid poset (Z^n box restriction)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridDoc>,
    /// optional partition hint consumed by `encode`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regions: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MorphismDoc {
    pub source: PosetDoc,
    pub target: PosetDoc,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EncodingDoc {
    pub source: PosetDoc,
    pub target: PosetDoc,
    pub map: Vec<usize>,
    pub h_dims: Vec<usize>,
    pub h_edges: Vec<EdgeDoc>,
    pub witnesses: Vec<Vec<Vec<String>>>,
    pub module: ModuleDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SimplexDoc {
    pub vertices: Vec<usize>,
    pub grades: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FiltrationDoc {
    pub grid: GridDoc,
    pub simplices: Vec<SimplexDoc>,
}

/// A row/column label: upsets by minimal generators, downsets by maximal
/// cogenerators, Z^n face labels by base point and face.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum LabelDoc {
    Up { generators: Vec<usize> },
    Down { cogenerators: Vec<usize> },
    Flat { base: Vec<i64>, face: Vec<usize> },
    Injective { base: Vec<i64>, face: Vec<usize> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MonomialMatrixDoc {
    pub poset: PosetDoc,
    pub rows: Vec<LabelDoc>,
    pub cols: Vec<LabelDoc>,
    pub entries: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComplexDoc {
    pub poset: PosetDoc,
    pub direction: String,
    pub terms: Vec<Vec<LabelDoc>>,
    pub differentials: Vec<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateDoc {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "serde_json::Value::is_null", default)]
    pub details: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HomTableDoc {
    pub rows: usize,
    pub cols: usize,
    /// (row, col, dim Hom)
    pub dims: Vec<(usize, usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RankTableDoc {
    pub n: usize,
    /// (p, q, rank of the structure map) for all p ≤ q
    pub ranks: Vec<(usize, usize, usize)>,
}

pub fn serialize(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn deserialize(text: &str) -> Result<Document, IoError> {
    let doc: Document = serde_json::from_str(text)?;
    if doc.version != FORMAT_VERSION {
        return Err(IoError::Version(doc.version));
    }
    Ok(doc)
}

// ---------------------------------------------------------------------
// conversions between documents and library types

pub fn poset_to_doc(p: &FinitePoset) -> PosetDoc {
    PosetDoc {
        n: p.n_elements(),
        covers: p.covers().to_vec(),
        labels: None,
        upsets: None,
        regions: None,
        raw_relation: None,
    }
}

pub fn doc_to_poset(d: &PosetDoc) -> Result<FinitePoset, IoError> {
    Ok(FinitePoset::new(d.n, &d.covers)?)
}

fn matrix_to_doc(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn doc_to_matrix(
    field: Field,
    rows: usize,
    cols: usize,
    d: &[Vec<String>],
    path: &str,
) -> Result<Matrix, IoError> {
    if d.len() != rows || d.iter().any(|r| r.len() != cols) {
        return Err(schema(path, format!("expected a {rows}x{cols} matrix")));
    }
    let mut m = Matrix::zero(field, rows, cols);
    for (i, row) in d.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, field.parse(s)?);
        }
    }
    Ok(m)
}

pub fn module_to_doc(m: &PosetModule, grid: Option<&GridPoset>) -> ModuleDoc {
    let edges = m
        .poset()
        .covers()
        .iter()
        .map(|&(p, q)| EdgeDoc { from: p, to: q, matrix: matrix_to_doc(m.edge(p, q)) })
        .collect();
    ModuleDoc {
        poset: poset_to_doc(m.poset()),
        dims: m.dims().to_vec(),
        edges,
        grid: grid.map(|g| GridDoc { lo: g.lo().to_vec(), hi: g.hi().to_vec() }),
        regions: None,
    }
}

pub fn doc_to_module(
    field: Field,
    d: &ModuleDoc,
) -> Result<(Arc<FinitePoset>, PosetModule), IoError> {
    let poset = Arc::new(doc_to_poset(&d.poset)?);
    if d.dims.len() != poset.n_elements() {
        return Err(schema("dims", "one dimension per element"));
    }
    let mut edges = BTreeMap::new();
    for (k, e) in d.edges.iter().enumerate() {
        if e.from >= poset.n_elements() || e.to >= poset.n_elements() {
            return Err(schema(&format!("edges[{k}]"), "endpoint out of range"));
        }
        let m = doc_to_matrix(field, d.dims[e.to], d.dims[e.from], &e.matrix, &format!("edges[{k}].matrix"))?;
        edges.insert((e.from, e.to), m);
    }
    let module = PosetModule::new(poset.clone(), field, d.dims.clone(), edges)?;
    Ok((poset, module))
}

/// Grid-aware module loading for the zn commands.
pub fn doc_to_box_module(field: Field, d: &ModuleDoc) -> Result<BoxModule, IoError> {
    let g = d.grid.as_ref().ok_or_else(|| schema("grid", "zn commands need a grid"))?;
    let grid = GridPoset::new(&g.lo, &g.hi);
    let (_, module) = doc_to_module(field, d)?;
    if module.poset().fingerprint() != grid.poset.fingerprint() {
        return Err(schema("poset", "module poset does not match the grid poset"));
    }
    BoxModule::new(grid, module).map_err(|e| schema("grid", e.to_string()))
}

pub fn box_module_to_doc(bm: &BoxModule) -> ModuleDoc {
    module_to_doc(bm.module(), Some(bm.grid()))
}

fn region_to_label(poset: &FinitePoset, r: &Region) -> LabelDoc {
    match r {
        Region::Up(u) => LabelDoc::Up { generators: u.generators().to_vec() },
        Region::Down(d) => LabelDoc::Down { cogenerators: d.cogenerators().to_vec() },
    }
    .normalized(poset)
}

impl LabelDoc {
    fn normalized(self, _poset: &FinitePoset) -> LabelDoc {
        self
    }
}

pub fn label_to_region(poset: &FinitePoset, l: &LabelDoc, path: &str) -> Result<Region, IoError> {
    match l {
        LabelDoc::Up { generators } => {
            Ok(Region::Up(poset.upset_closure(generators).map_err(IoError::Poset)?))
        }
        LabelDoc::Down { cogenerators } => {
            Ok(Region::Down(poset.downset_closure(cogenerators).map_err(IoError::Poset)?))
        }
        _ => Err(schema(path, "face labels are only valid with a grid")),
    }
}

pub fn monomial_matrix_to_doc(poset: &FinitePoset, mm: &MonomialMatrix) -> MonomialMatrixDoc {
    MonomialMatrixDoc {
        poset: poset_to_doc(poset),
        rows: mm.rows.iter().map(|r| region_to_label(poset, r)).collect(),
        cols: mm.cols.iter().map(|c| region_to_label(poset, c)).collect(),
        entries: matrix_to_doc(&mm.entries),
        grid: None,
    }
}

pub fn doc_to_monomial_matrix(
    field: Field,
    d: &MonomialMatrixDoc,
) -> Result<(Arc<FinitePoset>, MonomialMatrix), IoError> {
    let poset = Arc::new(doc_to_poset(&d.poset)?);
    let rows: Vec<Region> = d
        .rows
        .iter()
        .enumerate()
        .map(|(i, l)| label_to_region(&poset, l, &format!("rows[{i}]")))
        .collect::<Result<_, _>>()?;
    let cols: Vec<Region> = d
        .cols
        .iter()
        .enumerate()
        .map(|(j, l)| label_to_region(&poset, l, &format!("cols[{j}]")))
        .collect::<Result<_, _>>()?;
    let entries = doc_to_matrix(field, rows.len(), cols.len(), &d.entries, "entries")?;
    Ok((poset, MonomialMatrix::new(rows, cols, entries)))
}

fn face_label_to_doc(l: &FaceLabel) -> LabelDoc {
    match l.kind {
        FaceKind::Flat => LabelDoc::Flat { base: l.base.clone(), face: l.face.clone() },
        FaceKind::Injective => LabelDoc::Injective { base: l.base.clone(), face: l.face.clone() },
    }
}

/// Monomial-matrix document with Z^n face labels (flange presentations).
pub fn flange_to_doc(bm: &BoxModule, fl: &crate::zn::FlangePresentation) -> MonomialMatrixDoc {
    MonomialMatrixDoc {
        poset: poset_to_doc(bm.module().poset()),
        rows: fl.flats.iter().map(face_label_to_doc).collect(),
        cols: fl.injectives.iter().map(face_label_to_doc).collect(),
        entries: matrix_to_doc(&fl.fringe.matrix.entries),
        grid: Some(GridDoc { lo: bm.grid().lo().to_vec(), hi: bm.grid().hi().to_vec() }),
    }
}

pub fn complex_to_doc(c: &IndicatorComplex) -> ComplexDoc {
    ComplexDoc {
        poset: poset_to_doc(&c.poset),
        direction: match c.direction {
            Direction::Homological => "up".to_string(),
            Direction::Cohomological => "down".to_string(),
        },
        terms: c
            .terms
            .iter()
            .map(|t| t.iter().map(|r| region_to_label(&c.poset, r)).collect())
            .collect(),
        differentials: c.differentials.iter().map(|d| matrix_to_doc(&d.entries)).collect(),
        grid: None,
    }
}

/// Complex document with face-decorated labels for the zn resolutions.
pub fn face_complex_to_doc(bm: &BoxModule, fc: &crate::zn::FaceComplex) -> ComplexDoc {
    let mut doc = complex_to_doc(&fc.complex);
    doc.terms = fc
        .faces
        .iter()
        .map(|term| term.iter().map(face_label_to_doc).collect())
        .collect();
    doc.grid = Some(GridDoc { lo: bm.grid().lo().to_vec(), hi: bm.grid().hi().to_vec() });
    doc
}

pub fn encoding_to_doc(e: &Encoding) -> EncodingDoc {
    let h_edges = e
        .h
        .poset()
        .covers()
        .iter()
        .map(|&(p, q)| EdgeDoc { from: p, to: q, matrix: matrix_to_doc(e.h.edge(p, q)) })
        .collect();
    EncodingDoc {
        source: poset_to_doc(&e.source_poset),
        target: poset_to_doc(e.h.poset()),
        map: e.morphism.map().to_vec(),
        h_dims: e.h.dims().to_vec(),
        h_edges,
        witnesses: e.witnesses.iter().map(matrix_to_doc).collect(),
        module: module_to_doc(&e.module, None),
    }
}

pub fn doc_to_encoding(field: Field, d: &EncodingDoc) -> Result<Encoding, IoError> {
    let source = Arc::new(doc_to_poset(&d.source)?);
    let target = Arc::new(doc_to_poset(&d.target)?);
    let morphism = PosetMorphism::new(&source, &target, d.map.clone())?;
    let mut edges = BTreeMap::new();
    for (k, e) in d.h_edges.iter().enumerate() {
        let m = doc_to_matrix(
            field,
            d.h_dims[e.to],
            d.h_dims[e.from],
            &e.matrix,
            &format!("h_edges[{k}].matrix"),
        )?;
        edges.insert((e.from, e.to), m);
    }
    let h = PosetModule::new(target.clone(), field, d.h_dims.clone(), edges)?;
    let (_, module) = doc_to_module(field, &d.module)?;
    let mut witnesses = Vec::with_capacity(d.witnesses.len());
    for (q, w) in d.witnesses.iter().enumerate() {
        let dim = module.dim_at(q);
        witnesses.push(doc_to_matrix(field, dim, dim, w, &format!("witnesses[{q}]"))?);
    }
    Encoding::new(source, morphism, h, witnesses, module)
        .map_err(|e| schema("witnesses", e.to_string()))
}

pub fn filtration_to_doc(f: &MultiFiltration) -> FiltrationDoc {
    FiltrationDoc {
        grid: GridDoc { lo: f.grid().lo().to_vec(), hi: f.grid().hi().to_vec() },
        simplices: f
            .simplices()
            .iter()
            .zip(f.entries())
            .map(|(s, e)| SimplexDoc {
                vertices: s.clone(),
                grades: {
                    let g = f.grid();
                    e.generators().iter().map(|&i| g.coord_of(i)).collect()
                },
            })
            .collect(),
    }
}

pub fn doc_to_filtration(d: &FiltrationDoc) -> Result<MultiFiltration, IoError> {
    let grid = GridPoset::new(&d.grid.lo, &d.grid.hi);
    MultiFiltration::new(
        grid,
        d.simplices.iter().map(|s| (s.vertices.clone(), s.grades.clone())).collect(),
    )
    .map_err(|e| schema("simplices", e.to_string()))
}

/// Region member list per uptight region, in document form.
pub fn elemset_to_vec(s: &ElemSet) -> Vec<usize> {
    s.iter().collect()
}
