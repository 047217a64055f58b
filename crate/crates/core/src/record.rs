//! Line-oriented text records for curves and constructed examples.
//!
//! Format: `key: value` header lines, then an optional `nodes:` sentinel
//! followed by one point per line (4 comma-separated field elements, `#`
//! comments ignored). The `field:` key must precede any polynomial and uses
//! the flag syntax `p[,k[,modulus]]` or `Q` for the rationals; a modulus is
//! written as ascending coefficients `c0:c1:...:ck` (monic).
//!
//! A curve record needs `field`, `surface`, `curve`; constructed examples
//! add their P^4 data (`q`, `w`, odd case `l`) and bookkeeping keys, and may
//! embed the verification report JSON under `report`.

use serde_json::Value;

use crate::construct::ExampleRecord;
use crate::curve::CurveRecord;
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::intersect::Parity;
use crate::points::PointSet;
use crate::poly::parse_poly;

/// Parse the `--field` syntax: `Q`, `p`, `p,k`, or `p,k,c0:c1:...:ck`.
pub fn parse_field_spec(spec: &str) -> Result<FieldCtx> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("q") || spec == "0" || spec.eq_ignore_ascii_case("rationals") {
        return Ok(FieldCtx::rationals());
    }
    let parts: Vec<&str> = spec.split(',').collect();
    let p: u64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad characteristic `{}`", parts[0])))?;
    match parts.len() {
        1 => FieldCtx::prime(p),
        2 | 3 => {
            let k: usize = parts[1]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad extension degree `{}`", parts[1])))?;
            let modulus = if parts.len() == 3 {
                let coeffs = parts[2]
                    .split(':')
                    .map(|c| {
                        c.trim()
                            .parse::<u64>()
                            .map_err(|_| Error::Parse(format!("bad modulus coefficient `{}`", c)))
                    })
                    .collect::<Result<Vec<u64>>>()?;
                Some(coeffs)
            } else {
                None
            };
            FieldCtx::finite(p, k, modulus)
        }
        _ => Err(Error::Parse(format!("bad field spec `{}`", spec))),
    }
}

/// Render a context back into the flag syntax.
pub fn field_spec_text(ctx: &FieldCtx) -> String {
    if ctx.is_rationals() {
        return "Q".into();
    }
    let p = ctx.characteristic();
    let k = ctx.extension_degree();
    match ctx.modulus() {
        None => format!("{}", p),
        Some(m) => {
            let coeffs: Vec<String> = m.iter().map(|c| c.to_string()).collect();
            format!("{},{},{}", p, k, coeffs.join(":"))
        }
    }
}

/// A parsed record file; which keys are present decides what it can become.
#[derive(Debug, Default)]
pub struct RecordFile {
    pub field: Option<FieldCtx>,
    pub surface: Option<String>,
    pub curve: Option<String>,
    pub q: Option<String>,
    pub w: Option<String>,
    pub l: Option<String>,
    pub parity: Option<Parity>,
    pub m: Option<i64>,
    pub n: Option<i64>,
    pub seed: Option<u64>,
    pub expected_delta: Option<i64>,
    pub double_curve_degree: Option<i64>,
    pub report: Option<Value>,
    pub node_lines: Vec<String>,
}

impl RecordFile {
    pub fn parse(text: &str) -> Result<RecordFile> {
        let mut rec = RecordFile::default();
        let mut in_nodes = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if in_nodes {
                rec.node_lines.push(line.to_string());
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(Error::Parse(format!(
                    "line {}: expected `key: value`, got `{}`",
                    lineno + 1,
                    line
                )));
            };
            let key = key.trim();
            let value = value.trim();
            match key {
                "field" => rec.field = Some(parse_field_spec(value)?),
                "surface" => rec.surface = Some(value.to_string()),
                "curve" => rec.curve = Some(value.to_string()),
                "q" => rec.q = Some(value.to_string()),
                "w" => rec.w = Some(value.to_string()),
                "l" => rec.l = Some(value.to_string()),
                "parity" => {
                    rec.parity = Some(match value {
                        "even" => Parity::Even,
                        "odd" => Parity::Odd,
                        other => return Err(Error::Parse(format!("bad parity `{}`", other))),
                    })
                }
                "m" => rec.m = Some(parse_num(value, "m")?),
                "n" => rec.n = Some(parse_num(value, "n")?),
                "seed" => {
                    rec.seed = Some(
                        value
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad seed `{}`", value)))?,
                    )
                }
                "expected_delta" => rec.expected_delta = Some(parse_num(value, "expected_delta")?),
                "double_curve_degree" => {
                    rec.double_curve_degree = Some(parse_num(value, "double_curve_degree")?)
                }
                "report" => {
                    rec.report = Some(
                        serde_json::from_str(value)
                            .map_err(|e| Error::Parse(format!("bad report JSON: {}", e)))?,
                    )
                }
                "nodes" => {
                    if !value.is_empty() {
                        return Err(Error::Parse("`nodes:` takes no inline value".into()));
                    }
                    in_nodes = true;
                }
                other => return Err(Error::Parse(format!("unknown record key `{}`", other))),
            }
        }
        Ok(rec)
    }

    fn ctx(&self) -> Result<&FieldCtx> {
        self.field
            .as_ref()
            .ok_or_else(|| Error::Parse("record is missing the `field:` line".into()))
    }

    pub fn nodes(&self) -> Result<Option<PointSet>> {
        if self.node_lines.is_empty() {
            return Ok(None);
        }
        let text = self.node_lines.join("\n");
        Ok(Some(PointSet::parse(self.ctx()?, &text)?))
    }

    /// Interpret as a curve record. When the file carries no node list the
    /// caller decides whether to enumerate; `nodes` comes back empty then.
    pub fn to_curve_record(&self) -> Result<(CurveRecord, bool)> {
        let ctx = self.ctx()?;
        let surface = parse_poly(
            self.surface
                .as_ref()
                .ok_or_else(|| Error::Parse("record is missing `surface:`".into()))?,
            ctx,
            4,
        )?;
        let curve = parse_poly(
            self.curve
                .as_ref()
                .ok_or_else(|| Error::Parse("record is missing `curve:`".into()))?,
            ctx,
            4,
        )?;
        let (nodes, had_nodes) = match self.nodes()? {
            Some(pts) => (pts, true),
            None => (PointSet::empty(ctx), false),
        };
        Ok((
            CurveRecord::new(surface, curve, nodes, self.expected_delta)?,
            had_nodes,
        ))
    }

    pub fn to_example_record(&self) -> Result<ExampleRecord> {
        let ctx = self.ctx()?.clone();
        let parity = self
            .parity
            .ok_or_else(|| Error::Parse("example record is missing `parity:`".into()))?;
        let m = self
            .m
            .ok_or_else(|| Error::Parse("example record is missing `m:`".into()))?;
        let need = |s: &Option<String>, key: &str| -> Result<String> {
            s.clone()
                .ok_or_else(|| Error::Parse(format!("example record is missing `{}:`", key)))
        };
        let q_poly = parse_poly(&need(&self.q, "q")?, &ctx, 5)?;
        let w_poly = parse_poly(&need(&self.w, "w")?, &ctx, 5)?;
        let plane_image = match (&self.l, parity) {
            (Some(l), _) => Some(parse_poly(l, &ctx, 4)?),
            (None, Parity::Odd) => {
                return Err(Error::Parse("odd example record is missing `l:`".into()))
            }
            (None, Parity::Even) => None,
        };
        let xprime = parse_poly(&need(&self.curve, "curve")?, &ctx, 4)?;
        let quintic = parse_poly(&need(&self.surface, "surface")?, &ctx, 4)?;
        let n = self.n.unwrap_or(xprime.degree() as i64);
        if n != xprime.degree() as i64 {
            return Err(Error::Parse(format!(
                "record says n = {} but the curve has degree {}",
                n,
                xprime.degree()
            )));
        }
        let expected_delta = self.expected_delta.unwrap_or(match parity {
            Parity::Even => 5 * (m * m - m),
            Parity::Odd => 5 * m * m,
        });
        Ok(ExampleRecord {
            parity,
            m,
            n,
            ctx,
            seed: self.seed.unwrap_or(0),
            q_poly,
            w_poly,
            plane_image,
            xprime,
            quintic,
            expected_delta,
            double_curve_degree: self.double_curve_degree.unwrap_or(match parity {
                Parity::Even => m * m - m,
                Parity::Odd => m * m,
            }),
        })
    }
}

fn parse_num(value: &str, key: &str) -> Result<i64> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer for `{}`: `{}`", key, value)))
}

/// Serialize a curve record (surface, curve, optional expected delta, nodes).
pub fn curve_record_text(rec: &CurveRecord) -> String {
    let mut out = String::new();
    out.push_str(&format!("field: {}\n", field_spec_text(rec.surface.ctx())));
    if let Some(e) = rec.delta_expected {
        out.push_str(&format!("expected_delta: {}\n", e));
    }
    out.push_str(&format!("surface: {}\n", rec.surface));
    out.push_str(&format!("curve: {}\n", rec.curve));
    if !rec.nodes.is_empty() {
        out.push_str("nodes:\n");
        out.push_str(&rec.nodes.to_text());
    }
    out
}

/// Serialize a constructed example, optionally embedding its verification
/// report and the node list found during verification.
pub fn example_record_text(
    rec: &ExampleRecord,
    report: Option<&Value>,
    nodes: Option<&PointSet>,
) -> String {
    let mut out = String::new();
    out.push_str(&format!("field: {}\n", field_spec_text(&rec.ctx)));
    out.push_str(&format!("parity: {}\n", rec.parity.as_str()));
    out.push_str(&format!("m: {}\n", rec.m));
    out.push_str(&format!("n: {}\n", rec.n));
    out.push_str(&format!("seed: {}\n", rec.seed));
    out.push_str(&format!("expected_delta: {}\n", rec.expected_delta));
    out.push_str(&format!(
        "double_curve_degree: {}\n",
        rec.double_curve_degree
    ));
    out.push_str(&format!("q: {}\n", rec.q_poly));
    out.push_str(&format!("w: {}\n", rec.w_poly));
    if let Some(l) = &rec.plane_image {
        out.push_str(&format!("l: {}\n", l));
    }
    out.push_str(&format!("surface: {}\n", rec.quintic));
    out.push_str(&format!("curve: {}\n", rec.xprime));
    if let Some(r) = report {
        out.push_str(&format!("report: {}\n", serde_json::to_string(r).unwrap()));
    }
    if let Some(pts) = nodes {
        if !pts.is_empty() {
            out.push_str("nodes:\n");
            out.push_str(&pts.to_text());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_even_example;

    #[test]
    fn field_spec_round_trip() {
        for spec in ["Q", "101", "7,2,1:0:1", "2,2,1:1:1"] {
            let ctx = parse_field_spec(spec).unwrap();
            let back = field_spec_text(&ctx);
            assert_eq!(parse_field_spec(&back).unwrap(), ctx);
        }
        // auto-modulus spec loses no information after one round trip
        let ctx = parse_field_spec("7,2").unwrap();
        assert_eq!(parse_field_spec(&field_spec_text(&ctx)).unwrap(), ctx);
        assert!(parse_field_spec("4").is_err());
    }

    #[test]
    fn curve_record_round_trip() {
        let ctx = FieldCtx::prime(7).unwrap();
        let f = parse_poly("x3", &ctx, 4).unwrap();
        let g = parse_poly("x1*x2 + x0*x3", &ctx, 4).unwrap();
        let nodes = PointSet::parse(&ctx, "1,0,0,0\n").unwrap();
        let rec = CurveRecord::new(f, g, nodes, Some(1)).unwrap();
        let text = curve_record_text(&rec);
        let parsed = RecordFile::parse(&text).unwrap();
        let (rec2, had_nodes) = parsed.to_curve_record().unwrap();
        assert!(had_nodes);
        assert_eq!(rec2.surface, rec.surface);
        assert_eq!(rec2.curve, rec.curve);
        assert_eq!(rec2.nodes, rec.nodes);
        assert_eq!(rec2.delta_expected, Some(1));
    }

    #[test]
    fn example_record_round_trip() {
        let ctx = FieldCtx::prime(101).unwrap();
        let rec = build_even_example(3, &ctx, 42).unwrap();
        let text = example_record_text(&rec, Some(&serde_json::json!({"status": "partial"})), None);
        let parsed = RecordFile::parse(&text).unwrap();
        assert_eq!(parsed.report.as_ref().unwrap()["status"], "partial");
        let rec2 = parsed.to_example_record().unwrap();
        assert_eq!(rec2.xprime, rec.xprime);
        assert_eq!(rec2.q_poly, rec.q_poly);
        assert_eq!(rec2.quintic, rec.quintic);
        assert_eq!(rec2.expected_delta, 30);
        // and the generic curve-record view works on the same text
        let (curve_rec, had_nodes) = parsed.to_curve_record().unwrap();
        assert!(!had_nodes);
        assert_eq!(curve_rec.surface, rec.quintic);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(
            RecordFile::parse("bogus: 1\n"),
            Err(Error::Parse(_))
        ));
    }
}
