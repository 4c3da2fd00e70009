//! Command-line front end: validate documents, run encodings,
//! presentations and resolutions, and emit monomial matrices and
//! certificates deterministically.
//!
//! Exit codes: 0 success, 1 validation failure (a certificate document is
//! printed), 2 malformed input.

use clap::{Parser, Subcommand, ValueEnum};
use posetmod::encoding::{construct_witnesses, uptight_encoding, EncodingError};
use posetmod::filtration;
use posetmod::indicator::{hom_indicator, IndicatorModule, Region};
use posetmod::io::{self, Document, Payload};
use posetmod::linalg::Field;
use posetmod::module::ModuleError;
use posetmod::poset::ElemSet;
use posetmod::resolve;
use posetmod::zn;
use serde_json::json;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "posetmod", version, about = "homological algebra of modules over finite posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// coefficient field: a prime p, or Q for the rationals
    #[arg(long, global = true)]
    field: Option<String>,
    /// also write the output document to this directory
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dir {
    Up,
    Down,
}

#[derive(Subcommand)]
enum Command {
    /// Validate any document; prints a certificate and exits 1 on failure
    Validate { input: String },
    /// Hom dimensions between the row and column labels of a monomial matrix
    Hom { input: String },
    /// Uptight regions and uptight poset of the upset family in a poset document
    Uptight { input: String },
    /// Uptight encoding of a module (regions field or singletons), or the
    /// natural encoding of a filtration in one homology degree
    Encode {
        input: String,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Fringe presentation of an encoded module
    Fringe { input: String },
    /// Minimal upset (up) or downset (down) resolution of a module
    Resolve {
        input: String,
        #[arg(long, value_enum, default_value = "up")]
        direction: Dir,
    },
    /// Minimal upset presentation (up) or downset copresentation (down)
    Present {
        input: String,
        #[arg(long, value_enum, default_value = "up")]
        direction: Dir,
    },
    /// Flange presentation of a Z^n box module
    ZnFlange { input: String },
    /// Matlis dual of a Z^n box module
    ZnMatlis { input: String },
    /// Minimal flat (up) or injective (down) resolution of a box module
    ZnResolve {
        input: String,
        #[arg(long, value_enum, default_value = "down")]
        direction: Dir,
    },
    /// Persistent homology of a multifiltration as a module over the grid
    Ph {
        input: String,
        #[arg(long, default_value_t = 0)]
        degree: usize,
    },
    /// Rank invariant of a module
    Rank { input: String },
}

/// Failure modes mapped to exit codes.
enum Failure {
    /// exit 2
    Malformed(String),
    /// exit 1, with a machine-readable certificate
    Invalid(io::CertificateDoc),
}

impl From<io::IoError> for Failure {
    fn from(e: io::IoError) -> Failure {
        Failure::Malformed(e.to_string())
    }
}

fn certificate(code: &str, message: String, details: serde_json::Value) -> Failure {
    Failure::Invalid(io::CertificateDoc { code: code.to_string(), message, details })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(doc) => {
            let text = io::serialize(&doc);
            print!("{text}");
            if let Some(dir) = &cli.out_dir {
                let path = dir.join(format!("{}.json", doc.payload.kind_name()));
                if let Err(e) = std::fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(cert)) => {
            let doc = Document::new(Field::GF2, Payload::Certificate(cert));
            print!("{}", io::serialize(&doc));
            ExitCode::from(1)
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &str) -> Result<Document, Failure> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Malformed(e.to_string()))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{path}: {e}")))?
    };
    Ok(io::deserialize(&text)?)
}

/// The effective field: the document's unless overridden; scalar-carrying
/// documents refuse a conflicting override.
fn effective_field(cli: &Cli, doc: &Document) -> Result<Field, Failure> {
    let doc_field = doc.field()?;
    match &cli.field {
        None => Ok(doc_field),
        Some(s) => {
            let flag: Field =
                s.parse().map_err(|_| Failure::Malformed(format!("bad --field {s:?}")))?;
            let scalar_free = matches!(doc.payload, Payload::Filtration(_) | Payload::Poset(_));
            if !scalar_free && flag != doc_field {
                return Err(Failure::Malformed(format!(
                    "--field {flag} conflicts with document field {doc_field}"
                )));
            }
            Ok(flag)
        }
    }
}

fn run(cli: &Cli) -> Result<Document, Failure> {
    match &cli.command {
        Command::Validate { input } => cmd_validate(cli, input),
        Command::Hom { input } => cmd_hom(cli, input),
        Command::Uptight { input } => cmd_uptight(cli, input),
        Command::Encode { input, degree } => cmd_encode(cli, input, *degree),
        Command::Fringe { input } => cmd_fringe(cli, input),
        Command::Resolve { input, direction } => cmd_resolve(cli, input, *direction, None),
        Command::Present { input, direction } => cmd_resolve(cli, input, *direction, Some(1)),
        Command::ZnFlange { input } => cmd_zn_flange(cli, input),
        Command::ZnMatlis { input } => cmd_zn_matlis(cli, input),
        Command::ZnResolve { input, direction } => cmd_zn_resolve(cli, input, *direction),
        Command::Ph { input, degree } => cmd_ph(cli, input, *degree),
        Command::Rank { input } => cmd_rank(cli, input),
    }
}

fn module_failure(e: ModuleError) -> Failure {
    match &e {
        ModuleError::NonCommuting { p, q, via_a, via_b } => certificate(
            "non-commuting-diamond",
            e.to_string(),
            json!({"from": p, "to": q, "via": [via_a, via_b]}),
        ),
        _ => certificate("invalid-module", e.to_string(), serde_json::Value::Null),
    }
}

fn load_module(
    cli: &Cli,
    input: &str,
) -> Result<(Field, io::ModuleDoc, posetmod::module::PosetModule), Failure> {
    let doc = read_input(input)?;
    let field = effective_field(cli, &doc)?;
    let Payload::Module(md) = doc.payload else {
        return Err(Failure::Malformed("expected a module document".to_string()));
    };
    let (_, module) = io::doc_to_module(field, &md).map_err(|e| match e {
        io::IoError::Module(me) => module_failure(me),
        other => Failure::Malformed(other.to_string()),
    })?;
    Ok((field, md, module))
}

fn cmd_validate(cli: &Cli, input: &str) -> Result<Document, Failure> {
    let doc = read_input(input)?;
    let field = effective_field(cli, &doc)?;
    match &doc.payload {
        Payload::Poset(pd) => {
            io::doc_to_poset(pd).map_err(|e| {
                certificate("invalid-poset", e.to_string(), serde_json::Value::Null)
            })?;
        }
        Payload::Module(md) => {
            io::doc_to_module(field, md).map_err(|e| match e {
                io::IoError::Module(me) => module_failure(me),
                other => Failure::Malformed(other.to_string()),
            })?;
        }
        Payload::MonomialMatrix(mm) => {
            let (poset, mm) = io::doc_to_monomial_matrix(field, mm)?;
            let violations = mm.validate(&poset);
            if !violations.is_empty() {
                let details: Vec<_> = violations
                    .iter()
                    .map(|v| json!({"row": v.row, "col": v.col, "reason": v.reason}))
                    .collect();
                return Err(certificate(
                    "scalar-rule-violation",
                    format!("{} entries violate the label rule", violations.len()),
                    json!(details),
                ));
            }
        }
        Payload::Filtration(fd) => {
            let f = io::doc_to_filtration(fd)?;
            let violations = f.validate();
            if !violations.is_empty() {
                let details: Vec<_> = violations
                    .iter()
                    .map(|v| json!({"simplex": v.simplex, "face": v.face}))
                    .collect();
                return Err(certificate(
                    "filtration-violation",
                    format!("{} face-monotonicity violations", violations.len()),
                    json!(details),
                ));
            }
        }
        Payload::Encoding(ed) => {
            io::doc_to_encoding(field, ed).map_err(|e| {
                certificate("invalid-encoding", e.to_string(), serde_json::Value::Null)
            })?;
        }
        other => {
            return Err(Failure::Malformed(format!(
                "no validator for {} documents",
                other.kind_name()
            )))
        }
    }
    Ok(Document::new(
        field,
        Payload::Certificate(io::CertificateDoc {
            code: "ok".to_string(),
            message: format!("{} document is valid", doc.payload.kind_name()),
            details: serde_json::Value::Null,
        }),
    ))
}

fn cmd_hom(cli: &Cli, input: &str) -> Result<Document, Failure> {
    let doc = read_input(input)?;
    let field = effective_field(cli, &doc)?;
    let Payload::MonomialMatrix(mm) = doc.payload else {
        return Err(Failure::Malformed("expected a monomial-matrix document".to_string()));
    };
    let (poset, mm) = io::doc_to_monomial_matrix(field, &mm)?;
    let wrap = |r: &Region| match r {
        Region::Up(u) => IndicatorModule::upset(&poset, field, u.clone()),
        Region::Down(d) => IndicatorModule::downset(&poset, field, d.clone()),
    };
    let mut dims = Vec::new();
    for (i, r) in mm.rows.iter().enumerate() {
        for (j, c) in mm.cols.iter().enumerate() {
            // orient source/target the way evaluation does
            let (src, tgt) =
                if r.is_up() && c.is_up() { (c, r) } else { (r, c) };
            let hom = hom_indicator(&poset, &wrap(src), &wrap(tgt))
                .map_err(|e| Failure::Malformed(e.to_string()))?;
            dims.push((i, j, hom.dimension));
        }
    }
    Ok(Document::new(
        field,
        Payload::HomTable(io::HomTableDoc { rows: mm.rows.len(), cols: mm.cols.len(), dims }),
    ))
}

fn cmd_uptight(cli: &Cli, input: &str) -> Result<Document, Failure> {
    let doc = read_input(input)?;
    let field = effective_field(cli, &doc)?;
    let Payload::Poset(pd) = doc.payload else {
        return Err(Failure::Malformed("expected a poset document".to_string()));
    };
    let poset = io::doc_to_poset(&pd)
        .map_err(|e| certificate("invalid-poset", e.to_string(), serde_json::Value::Null))?;
    let upsets = pd
        .upsets
        .as_ref()
        .ok_or_else(|| Failure::Malformed("poset document carries no upset family".to_string()))?;
    let mut family = Vec::new();
    for (k, u) in upsets.iter().enumerate() {
        family.push(
            poset
                .upset_closure(&u.generators)
                .map_err(|e| Failure::Malformed(format!("upsets[{k}]: {e}")))?,
        );
    }
    let up = poset.uptight_poset(&family);
    let labels: Vec<String> = up.regions.iter().map(|r| r.to_string()).collect();
    let mut out = io::poset_to_doc(&up.poset);
    out.labels = Some(labels);
    out.regions = Some(up.regions.iter().map(io::elemset_to_vec).collect());
    out.raw_relation =
        Some(io::RawRelationDoc { edges: up.raw_edges.clone(), transitive: up.raw_transitive });
    Ok(Document::new(field, Payload::Poset(out)))
}

fn cmd_encode(cli: &Cli, input: &str, degree: Option<usize>) -> Result<Document, Failure> {
    let doc = read_input(input)?;
    let field = effective_field(cli, &doc)?;
    match &doc.payload {
        Payload::Module(md) => {
            let (_, module) = io::doc_to_module(field, md).map_err(|e| match e {
                io::IoError::Module(me) => module_failure(me),
                other => Failure::Malformed(other.to_string()),
            })?;
            let n = module.poset().n_elements();
            let partition: Vec<ElemSet> = match &md.regions {
                Some(rs) => rs.iter().map(|r| ElemSet::from_iter(n, r.iter().copied())).collect(),
                None => (0..n).map(|i| ElemSet::from_iter(n, [i])).collect(),
            };
            let cs = construct_witnesses(&module, &partition).map_err(|e| match &e {
                EncodingError::Monodromy(cert) => certificate(
                    "monodromy",
                    e.to_string(),
                    json!({
                        "regions": [cert.region_a, cert.region_b],
                        "pairs": [cert.pair_a, cert.pair_b],
                    }),
                ),
                _ => certificate("invalid-subdivision", e.to_string(), serde_json::Value::Null),
            })?;
            let enc = uptight_encoding(&cs)
                .map_err(|e| Failure::Malformed(format!("uptight encoding failed: {e}")))?;
            Ok(Document::new(field, Payload::Encoding(io::encoding_to_doc(&enc))))
        }
        Payload::Filtration(fd) => {
            let f = io::doc_to_filtration(fd)?;
            let degree = degree.unwrap_or(0);
            let (_, enc) = filtration::natural_encoding(&f, field, degree).map_err(|e| {
                certificate("invalid-filtration", e.to_string(), serde_json::Value::Null)
            })?;
            Ok(Document::new(field, Payload::Encoding(io::encoding_to_doc(&enc))))
        }
        other => Err(Failure::Malformed(format!(
            "encode expects a module or filtration document, got {}",
            other.kind_name()
        ))),
    }
}

fn cmd_fringe(cli: &Cli, input: &str) -> Result<Document, Failure> {
    let doc = read_input(input)?;
    let field = effective_field(cli, &doc)?;
    let Payload::Encoding(ed) = doc.payload else {
        return Err(Failure::Malformed("expected an encoding document".to_string()));
    };
    let enc = io::doc_to_encoding(field, &ed)
        .map_err(|e| certificate("invalid-encoding", e.to_string(), serde_json::Value::Null))?;
    let fp = resolve::fringe_presentation(&enc)
        .map_err(|e| Failure::Malformed(format!("fringe synthesis failed: {e}")))?;
    Ok(Document::new(
        field,
        Payload::MonomialMatrix(io::monomial_matrix_to_doc(&enc.source_poset, &fp.matrix)),
    ))
}

fn cmd_resolve(
    cli: &Cli,
    input: &str,
    direction: Dir,
    max_length: Option<usize>,
) -> Result<Document, Failure> {
    let (field, _, module) = load_module(cli, input)?;
    let complex = match (direction, max_length) {
        (Dir::Up, None) => resolve::upset_resolution(&module),
        (Dir::Down, None) => resolve::downset_resolution(&module),
        (Dir::Up, Some(_)) => resolve::presentations(&module).map(|p| p.0),
        (Dir::Down, Some(_)) => resolve::presentations(&module).map(|p| p.1),
    }
    .map_err(|e| Failure::Malformed(format!("resolution failed: {e}")))?;
    Ok(Document::new(field, Payload::Complex(io::complex_to_doc(&complex))))
}

fn load_box_module(cli: &Cli, input: &str) -> Result<(Field, zn::BoxModule), Failure> {
    let doc = read_input(input)?;
    let field = effective_field(cli, &doc)?;
    let Payload::Module(md) = doc.payload else {
        return Err(Failure::Malformed("expected a module document with a grid".to_string()));
    };
    let bm = io::doc_to_box_module(field, &md).map_err(|e| match e {
        io::IoError::Module(me) => module_failure(me),
        other => Failure::Malformed(other.to_string()),
    })?;
    Ok((field, bm))
}

fn cmd_zn_flange(cli: &Cli, input: &str) -> Result<Document, Failure> {
    let (field, bm) = load_box_module(cli, input)?;
    let fl = bm
        .flange_presentation()
        .map_err(|e| Failure::Malformed(format!("flange synthesis failed: {e}")))?;
    Ok(Document::new(field, Payload::MonomialMatrix(io::flange_to_doc(&bm, &fl))))
}

fn cmd_zn_matlis(cli: &Cli, input: &str) -> Result<Document, Failure> {
    let (field, bm) = load_box_module(cli, input)?;
    let dual = bm.matlis_dual();
    Ok(Document::new(field, Payload::Module(io::box_module_to_doc(&dual))))
}

fn cmd_zn_resolve(cli: &Cli, input: &str, direction: Dir) -> Result<Document, Failure> {
    let (field, bm) = load_box_module(cli, input)?;
    let fc = match direction {
        Dir::Down => bm.minimal_injective_resolution(),
        Dir::Up => bm.minimal_flat_resolution(),
    }
    .map_err(|e| Failure::Malformed(format!("resolution failed: {e}")))?;
    Ok(Document::new(field, Payload::Complex(io::face_complex_to_doc(&bm, &fc))))
}

fn cmd_ph(cli: &Cli, input: &str, degree: usize) -> Result<Document, Failure> {
    let doc = read_input(input)?;
    let field = effective_field(cli, &doc)?;
    let Payload::Filtration(fd) = doc.payload else {
        return Err(Failure::Malformed("expected a filtration document".to_string()));
    };
    let f = io::doc_to_filtration(&fd)?;
    let violations = f.validate();
    if !violations.is_empty() {
        let details: Vec<_> =
            violations.iter().map(|v| json!({"simplex": v.simplex, "face": v.face})).collect();
        return Err(certificate(
            "filtration-violation",
            format!("{} face-monotonicity violations", violations.len()),
            json!(details),
        ));
    }
    let ph = filtration::persistent_homology(&f, field, degree)
        .map_err(|e| Failure::Malformed(e.to_string()))?;
    let grid = f.grid().clone();
    let mut md = io::module_to_doc(&ph.module, Some(&grid));
    // carry the realized subcomplex classes so a later `encode` recovers
    // the natural encoding
    md.regions = Some(
        (0..ph.classes.len())
            .map(|k| (0..grid.poset.n_elements()).filter(|&q| ph.class_of[q] == k).collect())
            .collect(),
    );
    Ok(Document::new(field, Payload::Module(md)))
}

fn cmd_rank(cli: &Cli, input: &str) -> Result<Document, Failure> {
    let (field, _, module) = load_module(cli, input)?;
    let ranks: Vec<(usize, usize, usize)> =
        module.rank_invariant().into_iter().map(|((p, q), r)| (p, q, r)).collect();
    Ok(Document::new(
        field,
        Payload::RankTable(io::RankTableDoc { n: module.poset().n_elements(), ranks }),
    ))
}
