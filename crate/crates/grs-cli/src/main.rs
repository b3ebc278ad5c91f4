//! `grs`: command-line front end. Every subcommand reads structured JSON
//! inputs, runs one library operation, and emits a deterministic JSON report
//! with a top-level "anchors" list repeating every literature citation the
//! run relied on.
//!
//! Exit codes: 0 success, 1 validation or input error, 2 internal invariant
//! violation (always a bug).

use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use grs_core::abelian::{
    is_direct_double, parse_group_spec, tensor_zp, FgAbelianGroup, GroupDoc,
};
use grs_core::gen::{generate_space, GenKind};
use grs_core::growth::{
    audit_soliton_identities, blowup_candidates, check_noncollapsing, fit_bounded, fit_quadratic,
    shi_admissible_radius, BlowupMode,
};
use grs_core::intmat::{hnf_rows, smith_normal_form, IntMatrix, MatrixDoc};
use grs_core::metric::{load_space, LoadedSpace, PointedSpace, SpaceDocument};
use grs_core::obstruction::{
    boundary_feasibility, check_exact, max_disjoint_copies, theorem31_pipeline, CopiesBound,
    PresentedMap, SequenceSpec,
};
use grs_core::selection::{
    iteration_bound, select_point, select_sequence, verify_certificate, SelectionParams,
};
use grs_core::space_forms::{
    abelianization, catalog, parse_space_form_spec, quaternion_oracle, Family,
};

const DEFAULT_QUOTIENT_CAP: u128 = 1024;

#[derive(Parser)]
#[command(name = "grs", about = "Certified point selection and homological obstruction toolkit")]
struct Cli {
    /// Tolerance for identity audits.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on enumerated quotient group orders (env: GRS_QUOTIENT_CAP).
    #[arg(long)]
    quotient_cap: Option<u128>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Select a controlled point from a start point; emit the certificate.
    Select {
        #[arg(long)]
        space: String,
        #[arg(long)]
        start: String,
        #[arg(long)]
        a0: f64,
    },
    /// Run selection from several starts with the canonical A = (1/3)P^(1/2).
    Sequence {
        #[arg(long)]
        space: String,
        /// Comma-separated start point ids.
        #[arg(long)]
        starts: String,
    },
    /// Fit a growth model to the stored field.
    Growth {
        #[arg(long)]
        space: String,
        #[arg(long, value_parser = ["bounded", "quadratic"])]
        model: String,
    },
    /// Rank blow-up candidate points.
    Blowup {
        #[arg(long)]
        space: String,
        #[arg(long, value_parser = ["scale", "abs"])]
        mode: String,
        #[arg(short)]
        k: usize,
    },
    /// Largest admissible radius at a point for gradient-controlled balls.
    Shi {
        #[arg(long)]
        space: String,
        #[arg(long)]
        point: String,
    },
    /// Audit the soliton identities on the stored sample.
    Audit {
        #[arg(long)]
        space: String,
    },
    /// Check the volume-noncollapsing inequality.
    Kappa {
        #[arg(long)]
        space: String,
        #[arg(long)]
        kappa: f64,
    },
    /// Smith normal form of an integer matrix.
    Snf {
        #[arg(long)]
        matrix: String,
    },
    /// Canonical form of a group given by relations.
    Group {
        #[arg(long)]
        relations: String,
    },
    /// Is the group a direct double A + A?
    Double {
        #[arg(long)]
        group: String,
    },
    /// Dimension of (group tensor Z_p).
    Tensor {
        #[arg(long)]
        group: String,
        #[arg(short)]
        p: u64,
    },
    /// Inspect one space-form group catalog entry.
    Spaceform {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Run the bounded-disjoint-copies pipeline for a boundary group.
    Obstruct {
        #[arg(long)]
        gamma: String,
        /// Also write the step trace to this file.
        #[arg(long)]
        trace: Option<String>,
    },
    /// Which quotients could be the first homology of a filling?
    Feasible {
        #[arg(long)]
        group: String,
    },
    /// Check exactness of a sequence of maps at every interior node.
    Exact {
        #[arg(long)]
        sequence: String,
    },
    /// Bound on disjoint copies from the cokernel embedding argument.
    Copies {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        coker: String,
    },
    /// Generate a space document.
    Gen {
        #[arg(long, value_parser = ["path", "grid2", "grid4", "random-geometric", "cone"])]
        kind: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        side: Option<usize>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
    },
}

fn read_space(path: &str) -> Result<(SpaceDocument, LoadedSpace)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let doc = SpaceDocument::from_json(&text)?;
    let loaded = load_space(&doc)?;
    Ok((doc, loaded))
}

fn require_base(loaded: &LoadedSpace) -> Result<usize> {
    loaded
        .base
        .ok_or_else(|| anyhow!("space document has no base point"))
}

fn require_sample(loaded: &LoadedSpace) -> Result<&grs_core::metric::SolitonSample> {
    loaded
        .sample
        .as_ref()
        .ok_or_else(|| anyhow!("space document carries no soliton sample fields"))
}

fn bigint_json(v: &num_bigint::BigInt) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn matrix_json(m: &IntMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows)
        .map(|i| Value::Array((0..m.cols).map(|j| bigint_json(m.get(i, j))).collect()))
        .collect();
    json!({"rows": m.rows, "cols": m.cols, "entries": rows})
}

fn group_json(g: &FgAbelianGroup) -> Value {
    json!({
        "rank": g.rank(),
        "factors": g.factors_u64(),
        "display": g.to_string(),
    })
}

fn quotient_cap(cli: &Cli) -> Result<u128> {
    if let Some(cap) = cli.quotient_cap {
        return Ok(cap);
    }
    match std::env::var("GRS_QUOTIENT_CAP") {
        Ok(s) => s
            .parse::<u128>()
            .map_err(|_| anyhow!("GRS_QUOTIENT_CAP must be an integer, got {s:?}")),
        Err(_) => Ok(DEFAULT_QUOTIENT_CAP),
    }
}

fn parse_family(name: &str) -> Result<Family> {
    Ok(match name {
        "cyclic" => Family::Cyclic,
        "binary-dihedral" => Family::BinaryDihedral,
        "binary-tetrahedral" => Family::BinaryTetrahedral,
        "binary-octahedral" => Family::BinaryOctahedral,
        "binary-icosahedral" => Family::BinaryIcosahedral,
        other => return Err(anyhow!("unknown family {other:?}")),
    })
}

/// Wire format for the `exact` subcommand: groups in order plus one map
/// matrix (rows = source generators) between each consecutive pair.
#[derive(serde::Deserialize)]
struct SequenceDoc {
    groups: Vec<GroupDoc>,
    maps: Vec<Vec<Vec<i64>>>,
}

fn run(cli: &Cli) -> Result<(Value, Vec<String>)> {
    let mut anchors: Vec<String> = Vec::new();
    let report = match &cli.cmd {
        Cmd::Select { space, start, a0 } => {
            let (_, loaded) = read_space(space)?;
            let y0 = loaded.space.index_of(start)?;
            let params = SelectionParams { y0, a0: *a0 };
            let cert = select_point(&loaded.space, &loaded.field, &params)?;
            let verification = verify_certificate(&loaded.space, &loaded.field, &params, &cert);
            let bound = iteration_bound(loaded.field.value(y0), loaded.field.max())?;
            json!({
                "certificate": cert.to_doc(&loaded.space),
                "verification": verification,
                "iteration_bound": bound,
            })
        }
        Cmd::Sequence { space, starts } => {
            let (_, loaded) = read_space(space)?;
            let idx: Result<Vec<usize>> = starts
                .split(',')
                .map(|s| loaded.space.index_of(s.trim()).map_err(Into::into))
                .collect();
            let certs = select_sequence(&loaded.space, &loaded.field, &idx?)?;
            let docs: Vec<_> = certs.iter().map(|c| c.to_doc(&loaded.space)).collect();
            json!({"certificates": docs})
        }
        Cmd::Growth { space, model } => {
            let (_, loaded) = read_space(space)?;
            let fit = match model.as_str() {
                "bounded" => fit_bounded(&loaded.field),
                "quadratic" => {
                    let base = require_base(&loaded)?;
                    let pointed = PointedSpace {
                        space: &loaded.space,
                        base,
                    };
                    fit_quadratic(&pointed, &loaded.field)
                }
                _ => unreachable!("clap validates the model name"),
            };
            json!({
                "model": model,
                "c": fit.c,
                "witness": loaded.space.id(fit.witness),
            })
        }
        Cmd::Blowup { space, mode, k } => {
            let (_, loaded) = read_space(space)?;
            let base = require_base(&loaded)?;
            let pointed = PointedSpace {
                space: &loaded.space,
                base,
            };
            let mode = match mode.as_str() {
                "scale" => BlowupMode::ScaleInvariant,
                _ => BlowupMode::Absolute,
            };
            let cands = blowup_candidates(&pointed, &loaded.field, mode, *k)?;
            let entries: Vec<Value> = cands
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "point": loaded.space.id(e.point),
                        "p": e.p,
                        "ratio": e.ratio,
                        "certificate": e.certificate.to_doc(&loaded.space),
                    })
                })
                .collect();
            json!({"mode": mode, "entries": entries})
        }
        Cmd::Shi { space, point } => {
            let (_, loaded) = read_space(space)?;
            let sample = require_sample(&loaded)?;
            let p = loaded.space.index_of(point)?;
            let r = shi_admissible_radius(sample, &loaded.space, p)?;
            json!({"point": point, "radius": r})
        }
        Cmd::Audit { space } => {
            let (_, loaded) = read_space(space)?;
            let sample = require_sample(&loaded)?;
            let rep = audit_soliton_identities(sample, &loaded.space, cli.tol)?;
            serde_json::to_value(&rep)?
        }
        Cmd::Kappa { space, kappa } => {
            let (_, loaded) = read_space(space)?;
            let sample = require_sample(&loaded)?;
            let rep = check_noncollapsing(sample, &loaded.space, &loaded.field, *kappa)?;
            serde_json::to_value(&rep)?
        }
        Cmd::Snf { matrix } => {
            let text = fs::read_to_string(matrix).with_context(|| format!("reading {matrix}"))?;
            let doc: MatrixDoc = serde_json::from_str(&text)?;
            let m = IntMatrix::from_doc(&doc)?;
            let snf = smith_normal_form(&m);
            json!({
                "d": matrix_json(&snf.d),
                "u": matrix_json(&snf.u),
                "v": matrix_json(&snf.v),
                "diagonal": snf.diagonal().iter().map(bigint_json).collect::<Vec<_>>(),
                "hermite": matrix_json(&hnf_rows(&m)),
            })
        }
        Cmd::Group { relations } => {
            let text =
                fs::read_to_string(relations).with_context(|| format!("reading {relations}"))?;
            let doc: GroupDoc = serde_json::from_str(&text)?;
            let g = match &doc {
                GroupDoc::Presented { .. } => FgAbelianGroup::from_doc(&doc)?,
                GroupDoc::Canonical { .. } => FgAbelianGroup::from_doc(&doc)?,
            };
            group_json(&g)
        }
        Cmd::Double { group } => {
            let g = parse_group_spec(group)?;
            let half = is_direct_double(&g)?;
            json!({
                "group": group_json(&g),
                "direct_double": half.is_some(),
                "half": half.map(|a| group_json(&a)),
            })
        }
        Cmd::Tensor { group, p } => {
            let g = parse_group_spec(group)?;
            let dim = tensor_zp(&g, *p)?;
            json!({"group": group_json(&g), "p": p, "dimension": dim})
        }
        Cmd::Spaceform { family, n } => {
            let fam = parse_family(family)?;
            let needs_n = matches!(fam, Family::Cyclic | Family::BinaryDihedral);
            let entries = catalog(Some(fam), n.unwrap_or(1))?;
            let g = if needs_n {
                let n = n.ok_or_else(|| anyhow!("family {family} requires --n"))?;
                entries
                    .into_iter()
                    .find(|g| g.param == Some(n))
                    .ok_or_else(|| anyhow!("no catalog entry for n = {n}"))?
            } else {
                entries.into_iter().next().expect("polyhedral entry")
            };
            let ab = abelianization(&g);
            if let Some(tag) = &g.annotations.b2_lower_bound {
                anchors.push(tag.citation.clone());
            }
            json!({
                "family": g.family.name(),
                "param": g.param,
                "order": g.order,
                "abelianization": group_json(&ab),
                "direct_double": is_direct_double(&ab)?.is_some(),
                "oracle_abelianization": group_json(&quaternion_oracle(&g)?),
                "annotations": g.annotations,
            })
        }
        Cmd::Obstruct { gamma, trace } => {
            let g = parse_space_form_spec(gamma)?;
            let verdict = theorem31_pipeline(&g)?;
            for step in &verdict.steps {
                if let Some(a) = &step.anchor {
                    anchors.push(a.citation.clone());
                }
            }
            let doc = serde_json::to_value(&verdict)?;
            if let Some(path) = trace {
                fs::write(path, serde_json::to_string_pretty(&doc)?)
                    .with_context(|| format!("writing {path}"))?;
            }
            doc
        }
        Cmd::Feasible { group } => {
            let g = parse_group_spec(group)?;
            let rep = boundary_feasibility(&g, quotient_cap(cli)?)?;
            serde_json::to_value(&rep)?
        }
        Cmd::Exact { sequence } => {
            let text =
                fs::read_to_string(sequence).with_context(|| format!("reading {sequence}"))?;
            let doc: SequenceDoc = serde_json::from_str(&text)?;
            let groups: Result<Vec<FgAbelianGroup>, grs_core::Error> =
                doc.groups.iter().map(FgAbelianGroup::from_doc).collect();
            let groups = groups?;
            if doc.maps.len() + 1 != groups.len() {
                return Err(anyhow!(
                    "need exactly one map between each consecutive pair of groups"
                ));
            }
            let mut maps = Vec::new();
            for (i, rows) in doc.maps.iter().enumerate() {
                let m = if rows.is_empty() {
                    PresentedMap::zero(groups[i].clone(), groups[i + 1].clone())
                } else {
                    PresentedMap::new(
                        groups[i].clone(),
                        groups[i + 1].clone(),
                        IntMatrix::from_i64(rows),
                    )?
                };
                maps.push(m);
            }
            let seq = SequenceSpec::new(groups, maps)?;
            let rep = check_exact(&seq);
            json!({"nodes": rep.nodes, "all_exact": rep.all_exact()})
        }
        Cmd::Copies { ambient, coker } => {
            let a = parse_group_spec(ambient)?;
            let c = parse_group_spec(coker)?;
            let bound = max_disjoint_copies(&a, &c)?;
            match bound {
                CopiesBound::Bounded(n) => json!({"bounded": true, "copies": n}),
                CopiesBound::Unbounded => json!({"bounded": false}),
            }
        }
        Cmd::Gen {
            kind,
            n,
            side,
            radius,
            c,
        } => {
            let need = |opt: Option<usize>, name: &str| {
                opt.ok_or_else(|| anyhow!("--kind {kind} requires --{name}"))
            };
            let gk = match kind.as_str() {
                "path" => GenKind::Path {
                    n: need(*n, "n")?,
                },
                "grid2" => GenKind::Grid2 {
                    side: need(*side, "side")?,
                },
                "grid4" => GenKind::Grid4 {
                    side: need(*side, "side")?,
                },
                "random-geometric" => GenKind::RandomGeometric {
                    n: need(*n, "n")?,
                    radius: radius.ok_or_else(|| anyhow!("--kind {kind} requires --radius"))?,
                },
                _ => GenKind::ConeField {
                    side: need(*side, "side")?,
                    c: c.ok_or_else(|| anyhow!("--kind cone requires --c"))?,
                },
            };
            let doc = generate_space(&gk, cli.seed)?;
            serde_json::to_value(&doc)?
        }
    };
    anchors.sort();
    anchors.dedup();
    Ok((report, anchors))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes; bad usage is exit 1
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = std::panic::catch_unwind(|| run(&cli));
    match outcome {
        Ok(Ok((report, anchors))) => {
            // `gen` emits a bare space document so its output can feed the
            // other subcommands; everything else gets the report envelope.
            let doc = if matches!(cli.cmd, Cmd::Gen { .. }) {
                report
            } else {
                json!({"anchors": anchors, "report": report})
            };
            let text = serde_json::to_string_pretty(&doc).expect("report serializes");
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, text + "\n") {
                        eprintln!("error: writing {path}: {e}");
                        return ExitCode::from(1);
                    }
                }
                None => println!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(_) => {
            eprintln!("internal error: invariant violation (this is a bug)");
            ExitCode::from(2)
        }
    }
}
