//! `severi` — command-line frontend for the exact-arithmetic nodal-curve
//! toolkit. JSON reports go to stdout, prose summaries to stderr, so
//! pipelines stay clean. Exit codes: 0 success, 2 invalid input or
//! hypothesis violation, 3 degenerate geometry (re-seed advised),
//! 4 inconclusive search.
//!
//! The one exception to JSON-on-stdout is `construct`, whose stdout is the
//! re-loadable example record (with the verification report embedded on its
//! `report:` line) so that `severi construct ... > rec.txt` followed by
//! `severi gln --record rec.txt` reproduces the verdict.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use severi_core::construct::{build_even_example, build_odd_example, verify_example, VerifyStatus};
use severi_core::curve::{
    gln_check, node_classify, plane_severi_check, severi_report, singular_points, CurveRecord,
    NodeType,
};
use severi_core::error::Error;
use severi_core::field::FieldCtx;
use severi_core::instability::instability_analyze;
use severi_core::intersect::{severi_bound, BoundQuery, Parity};
use severi_core::points::{
    conditions_imposed, koszul_ci_h0, random_grid_ci, socle_check, PointSet,
};
use severi_core::poly::parse_poly;
use severi_core::rational::{is_odd_integer, rat_parse};
use severi_core::record::{example_record_text, parse_field_spec, RecordFile};

#[derive(Parser)]
#[command(
    name = "severi",
    version,
    about = "Exact-arithmetic toolkit for nodal curves on surfaces in P^3"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a node-count bound (Severi smoothness or linear normality)
    Bounds {
        /// plane | k3 | pluricanonical | surface_p3 | quintic_odd | gln | gln_quintic_odd | gln_swapped
        #[arg(long)]
        kind: String,
        #[arg(long)]
        d: Option<i64>,
        #[arg(long)]
        n: Option<i64>,
        /// Multiple of the canonical class (rational `a/b` allowed)
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        pa: Option<i64>,
        /// K_S^2
        #[arg(long)]
        ksq: Option<i64>,
        /// Assume the Neron-Severi group is cyclic
        #[arg(long)]
        ns_cyclic: bool,
        /// Compare this node count against the bound
        #[arg(long)]
        delta: Option<i64>,
    },
    /// Bogomolov-instability interval analysis for x = M.K (or M.H)
    Instability {
        /// Curve class multiple (rational `a/b` allowed)
        #[arg(long)]
        lambda: String,
        /// Self-intersection of the polarization (K_S^2 or d)
        #[arg(long)]
        q: i64,
        #[arg(long)]
        delta: i64,
        #[arg(long)]
        ns_cyclic: bool,
    },
    /// Conditions imposed by a point file on degree-t forms
    Conditions {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        degree: usize,
        /// Field spec `p[,k[,modulus]]` or `Q`
        #[arg(long, default_value = "101")]
        field: String,
    },
    /// Koszul oracle for a complete intersection of type (a, b, c)
    CiOracle {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        t: usize,
    },
    /// Build a rational grid complete intersection and run the socle check
    GridCi {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        c: usize,
        #[arg(long, default_value = "101")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        retries: u32,
        /// Extra conditions report at this degree
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Enumerate rational singular points of {surface = curve = 0}
    Nodes {
        #[arg(long)]
        surface: Option<PathBuf>,
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Record file providing surface and curve instead
        #[arg(long)]
        record: Option<PathBuf>,
        #[arg(long)]
        field: Option<String>,
        /// Search over F_{p^k} for this k
        #[arg(long, default_value_t = 1)]
        search_k: usize,
    },
    /// Severi smoothness report for a record (enumerates nodes if absent)
    Severi {
        #[arg(long)]
        record: PathBuf,
        #[arg(long, default_value_t = 1)]
        search_k: usize,
    },
    /// Geometric-linear-normality verdict for a record
    Gln {
        #[arg(long)]
        record: PathBuf,
        #[arg(long, default_value_t = 1)]
        search_k: usize,
    },
    /// Rebuild a sharp example over a finite field and verify it
    Construct {
        /// even | odd
        #[arg(long)]
        parity: String,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value = "101")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        search_k: usize,
        /// Try seeds seed..=seed+retries until one is non-degenerate
        #[arg(long, default_value_t = 0)]
        retries: u64,
        /// Emit the JSON envelope instead of the record text
        #[arg(long)]
        json: bool,
    },
    /// Plane Severi bookkeeping: dimension, genus, degree identity
    PlaneSeveri {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        delta: i64,
    },
}

/// Search field for a record whose coefficients live in `base`: prime bases
/// extend to F_{p^k}, extension bases can only be searched over themselves.
fn resolve_search_ctx(base: &FieldCtx, search_k: usize) -> Result<FieldCtx, Error> {
    let base_k = base.extension_degree();
    if base_k > 1 {
        if search_k > base_k {
            return Err(Error::Hypothesis(format!(
                "record field is an extension of degree {}; --search-k {} would need a compatible embedding",
                base_k, search_k
            )));
        }
        Ok(base.clone())
    } else if search_k <= 1 {
        Ok(base.clone())
    } else {
        FieldCtx::finite(base.characteristic(), search_k, None)
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::ProjectionCenterOnHypersurface { .. }
        | Error::NotDivisible
        | Error::Degenerate(_)
        | Error::SurfaceSingular(_)
        | Error::NotASingularPoint(_)
        | Error::RetriesExhausted(_) => 3,
        _ => 2,
    }
}

fn emit(command: &str, inputs: Value, result: Value, flags: Vec<String>, warnings: Vec<String>) {
    let envelope = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "inputs_echo": inputs,
        "result": result,
        "flags": flags,
        "warnings": warnings,
    });
    println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))
}

/// Read a polynomial file: non-comment lines joined into one text.
fn read_poly_file(path: &PathBuf) -> Result<String, Error> {
    let text = read_file(path)?;
    Ok(text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" "))
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Bounds {
            kind,
            d,
            n,
            p,
            pa,
            ksq,
            ns_cyclic,
            delta,
        } => {
            let need = |o: Option<i64>, name: &str| {
                o.ok_or_else(|| Error::Parse(format!("--kind {} requires --{}", kind, name)))
            };
            let query = match kind.as_str() {
                "plane" => BoundQuery::Plane { d: need(d, "d")? },
                "k3" => BoundQuery::K3 {
                    pa: need(pa, "pa")?,
                },
                "pluricanonical" => {
                    let p_text = p
                        .as_ref()
                        .ok_or_else(|| Error::Parse("--kind pluricanonical requires --p".into()))?;
                    let p_rat = rat_parse(p_text)
                        .ok_or_else(|| Error::Parse(format!("bad rational --p `{}`", p_text)))?;
                    BoundQuery::Pluricanonical {
                        p: p_rat,
                        ksq: need(ksq, "ksq")?,
                        ns_cyclic,
                    }
                }
                "surface_p3" => BoundQuery::SurfaceP3 {
                    d: need(d, "d")?,
                    n: need(n, "n")?,
                },
                "quintic_odd" => {
                    let p_text = p
                        .as_ref()
                        .ok_or_else(|| Error::Parse("--kind quintic_odd requires --p".into()))?;
                    let p_int: i64 = p_text
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad integer --p `{}`", p_text)))?;
                    BoundQuery::QuinticOdd { p: p_int }
                }
                "gln" => BoundQuery::Gln {
                    d: need(d, "d")?,
                    n: need(n, "n")?,
                },
                "gln_quintic_odd" => BoundQuery::GlnQuinticOdd { n: need(n, "n")? },
                "gln_swapped" => BoundQuery::GlnSwapped {
                    d: need(d, "d")?,
                    n: need(n, "n")?,
                },
                other => return Err(Error::Parse(format!("unknown bound kind `{}`", other))),
            };
            let report = severi_bound(&query, delta)?;
            let inputs = json!({"kind": kind, "d": d, "n": n, "p": p, "pa": pa, "ksq": ksq, "ns_cyclic": ns_cyclic, "delta": delta});
            eprintln!("severi bounds: {}", report.verdict);
            emit("bounds", inputs, report.to_json(), vec![], vec![]);
            Ok(0)
        }
        Cmd::Instability {
            lambda,
            q,
            delta,
            ns_cyclic,
        } => {
            let l = rat_parse(&lambda)
                .ok_or_else(|| Error::Parse(format!("bad rational --lambda `{}`", lambda)))?;
            let odd = ns_cyclic && is_odd_integer(&l);
            let report = instability_analyze(&l, q, delta, ns_cyclic, odd)?;
            eprintln!("severi instability: {}", report.verdict);
            let inputs = json!({"lambda": lambda, "q": q, "delta": delta, "ns_cyclic": ns_cyclic, "lambda_odd_integer": odd});
            emit("instability", inputs, report.to_json(), vec![], vec![]);
            Ok(0)
        }
        Cmd::Conditions {
            points,
            degree,
            field,
        } => {
            let ctx = parse_field_spec(&field)?;
            let pts = PointSet::parse(&ctx, &read_file(&points)?)?;
            let report = conditions_imposed(&pts, degree);
            eprintln!(
                "severi conditions: {} points impose {} conditions on degree-{} forms (s = {})",
                report.num_points, report.rank, degree, report.superabundance
            );
            let inputs =
                json!({"points": points.display().to_string(), "degree": degree, "field": field});
            emit("conditions", inputs, report.to_json(), vec![], vec![]);
            Ok(0)
        }
        Cmd::CiOracle { a, b, c, t } => {
            if a < 1 || b < 1 || c < 1 {
                return Err(Error::Hypothesis("a, b, c >= 1 required".into()));
            }
            let report = koszul_ci_h0(a, b, c, t);
            eprintln!(
                "severi ci-oracle: CI({},{},{}) at t = {}: conditions {}, superabundance {}",
                a, b, c, t, report.conditions_predicted, report.superabundance_predicted
            );
            let inputs = json!({"a": a, "b": b, "c": c, "t": t});
            emit("ci-oracle", inputs, report.to_json(), vec![], vec![]);
            Ok(0)
        }
        Cmd::GridCi {
            a,
            b,
            c,
            field,
            seed,
            retries,
            degree,
        } => {
            let ctx = parse_field_spec(&field)?;
            let (pts, la, lb, lc) = random_grid_ci(a, b, c, &ctx, seed, retries)?;
            let socle = socle_check(&pts, a, b, c);
            let mut result = json!({
                "num_points": pts.len(),
                "points": pts.to_text().lines().collect::<Vec<_>>(),
                "forms_a": la.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "forms_b": lb.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "forms_c": lc.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "socle": socle.to_json(),
                "koszul_at_socle": koszul_ci_h0(a, b, c, socle.socle_degree.max(0) as usize).to_json(),
            });
            if let Some(t) = degree {
                result.as_object_mut().unwrap().insert(
                    "conditions_at_degree".into(),
                    conditions_imposed(&pts, t).to_json(),
                );
            }
            eprintln!(
                "severi grid-ci: {} points, socle degree {}, socle pattern {}",
                pts.len(),
                socle.socle_degree,
                if socle.ok { "confirmed" } else { "FAILED" }
            );
            let inputs =
                json!({"a": a, "b": b, "c": c, "field": field, "seed": seed, "retries": retries});
            emit("grid-ci", inputs, result, vec![], vec![]);
            Ok(0)
        }
        Cmd::Nodes {
            surface,
            curve,
            record,
            field,
            search_k,
        } => {
            let (f, g, base_ctx) = match (&record, &surface, &curve) {
                (Some(rec_path), _, _) => {
                    let rec = RecordFile::parse(&read_file(rec_path)?)?;
                    let (curve_rec, _) = rec.to_curve_record()?;
                    let ctx = curve_rec.surface.ctx().clone();
                    (curve_rec.surface, curve_rec.curve, ctx)
                }
                (None, Some(s), Some(c)) => {
                    let spec = field.clone().unwrap_or_else(|| "101".into());
                    let ctx = parse_field_spec(&spec)?;
                    let f = parse_poly(&read_poly_file(s)?, &ctx, 4)?;
                    let g = parse_poly(&read_poly_file(c)?, &ctx, 4)?;
                    (f, g, ctx)
                }
                _ => {
                    return Err(Error::Parse(
                        "provide either --record or both --surface and --curve".into(),
                    ))
                }
            };
            let search_ctx = resolve_search_ctx(&base_ctx, search_k)?;
            let pts = singular_points(&f, &g, &search_ctx)?;
            let lifted_f = f.lift(&search_ctx)?;
            let lifted_g = g.lift(&search_ctx)?;
            let mut classifications = Vec::new();
            for p in pts.iter() {
                let v = node_classify(&lifted_f, &lifted_g, p)?;
                classifications.push(v.as_str().to_string());
            }
            let all_nodes = classifications.iter().all(|c| c == "node");
            let result = json!({
                "search_field": format!("{}", search_ctx),
                "num_singular": pts.len(),
                "points": pts.to_text().lines().collect::<Vec<_>>(),
                "classifications": classifications,
                "all_nodes": all_nodes,
            });
            eprintln!(
                "severi nodes: {} rational singular point(s), all_nodes = {}",
                pts.len(),
                all_nodes
            );
            let inputs = json!({
                "record": record.map(|p| p.display().to_string()),
                "surface": surface.map(|p| p.display().to_string()),
                "curve": curve.map(|p| p.display().to_string()),
                "field": field, "search_k": search_k,
            });
            emit("nodes", inputs, result, vec![], vec![]);
            Ok(0)
        }
        Cmd::Severi { record, search_k } => {
            let (rec, from_search, warnings) = load_record_with_nodes(&record, search_k)?;
            if rec.nodes.is_empty() {
                eprintln!("severi severi: no nodes available — inconclusive");
                let inputs = json!({"record": record.display().to_string(), "search_k": search_k});
                emit(
                    "severi",
                    inputs,
                    json!({"status": "inconclusive", "delta_found": 0}),
                    vec!["no_rational_nodes".into()],
                    warnings,
                );
                return Ok(4);
            }
            let report = severi_report(&rec)?;
            eprintln!(
                "severi severi: delta = {}, rank = {}, h1 = {}, smooth_expected = {}",
                report.delta_found, report.rank_at_n, report.h1_ideal, report.smooth_expected
            );
            let inputs = json!({"record": record.display().to_string(), "search_k": search_k, "nodes_from_search": from_search});
            emit("severi", inputs, report.to_json(), vec![], warnings);
            Ok(0)
        }
        Cmd::Gln { record, search_k } => {
            let (rec, from_search, warnings) = load_record_with_nodes(&record, search_k)?;
            let report = gln_check(&rec)?;
            eprintln!(
                "severi gln: test degree {}, superabundance {}, gln = {}",
                report.test_degree, report.conditions.superabundance, report.gln
            );
            let inputs = json!({"record": record.display().to_string(), "search_k": search_k, "nodes_from_search": from_search});
            let code = if rec.nodes.is_empty() && rec.delta_expected.is_some_and(|e| e > 0) {
                4 // nothing found for a curve that should have nodes
            } else {
                0
            };
            emit("gln", inputs, report.to_json(), vec![], warnings);
            Ok(code)
        }
        Cmd::Construct {
            parity,
            m,
            field,
            seed,
            search_k,
            retries,
            json: json_out,
        } => {
            let ctx = parse_field_spec(&field)?;
            let parity = match parity.as_str() {
                "even" => Parity::Even,
                "odd" => Parity::Odd,
                other => return Err(Error::Parse(format!("bad parity `{}`", other))),
            };
            let mut last_err: Option<Error> = None;
            for try_seed in seed..=seed + retries {
                let rec = match parity {
                    Parity::Even => build_even_example(m, &ctx, try_seed),
                    Parity::Odd => build_odd_example(m, &ctx, try_seed),
                };
                let rec = match rec {
                    Ok(r) => r,
                    Err(e) => {
                        last_err = Some(e);
                        continue;
                    }
                };
                let report = verify_example(&rec, search_k)?;
                if report.status == VerifyStatus::Degenerate && try_seed < seed + retries {
                    continue; // re-seed
                }
                let report_json = report.to_json();
                let nodes = if report.nodes_text.is_empty() {
                    None
                } else {
                    Some(PointSet::parse(
                        &FieldCtx::finite(ctx.characteristic(), search_k.max(1), None)?,
                        &report.nodes_text.join("\n"),
                    )?)
                };
                eprintln!(
                    "severi construct: {} example, m = {}, seed = {}, status = {} ({} of {} nodes found)",
                    parity.as_str(),
                    m,
                    try_seed,
                    report.status.as_str(),
                    report.delta_found,
                    report.expected_delta
                );
                if json_out {
                    let inputs = json!({"parity": parity.as_str(), "m": m, "field": field, "seed": try_seed, "search_k": search_k});
                    let mut result = report_json.clone();
                    result.as_object_mut().unwrap().insert(
                        "record".into(),
                        Value::String(example_record_text(
                            &rec,
                            Some(&report_json),
                            nodes.as_ref(),
                        )),
                    );
                    emit("construct", inputs, result, vec![], vec![]);
                } else {
                    print!(
                        "{}",
                        example_record_text(&rec, Some(&report_json), nodes.as_ref())
                    );
                }
                return Ok(match report.status {
                    VerifyStatus::Complete => 0,
                    VerifyStatus::Partial | VerifyStatus::Inconclusive => 4,
                    VerifyStatus::Degenerate => 3,
                });
            }
            Err(last_err.unwrap_or_else(|| {
                Error::RetriesExhausted("all seeds degenerate in the sweep".into())
            }))
        }
        Cmd::PlaneSeveri { d, delta } => {
            let report = plane_severi_check(d, delta)?;
            eprintln!(
                "severi plane-severi: dim = {}, genus = {}, identity {} = {}",
                report.dim, report.genus, report.identity_lhs, report.identity_rhs
            );
            let inputs = json!({"d": d, "delta": delta});
            emit("plane-severi", inputs, report.to_json(), vec![], vec![]);
            Ok(0)
        }
    }
}

/// Load a record; when it carries no node list, enumerate over F_{p^k} and
/// classify every found point (a degenerate point is an error, exit 3).
fn load_record_with_nodes(
    path: &PathBuf,
    search_k: usize,
) -> Result<(CurveRecord, bool, Vec<String>), Error> {
    let rec_file = RecordFile::parse(&read_file(path)?)?;
    let (rec, had_nodes) = rec_file.to_curve_record()?;
    if had_nodes {
        return Ok((rec, false, vec![]));
    }
    let base_ctx = rec.surface.ctx().clone();
    if !base_ctx.is_finite() {
        return Ok((
            rec,
            false,
            vec!["no nodes listed and rational field precludes search".into()],
        ));
    }
    let search_ctx = resolve_search_ctx(&base_ctx, search_k)?;
    let pts = singular_points(&rec.surface, &rec.curve, &search_ctx)?;
    let f = rec.surface.lift(&search_ctx)?;
    let g = rec.curve.lift(&search_ctx)?;
    for p in pts.iter() {
        if node_classify(&f, &g, p)? != NodeType::Node {
            let text = p
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            return Err(Error::Degenerate(format!(
                "found singular point {} is not a node",
                text
            )));
        }
    }
    let mut warnings = Vec::new();
    if let Some(expected) = rec.delta_expected {
        if (pts.len() as i64) < expected {
            warnings.push(format!(
                "only {} of {} expected nodes are rational over the search field; reports are partial evidence",
                pts.len(),
                expected
            ));
        }
    }
    let rec = CurveRecord::new(f, g, pts, rec.delta_expected)?;
    Ok((rec, true, warnings))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("severi: error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}
