use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde_json::{json, Value};

use sctk_core::dioph::{
    convergent_height_check, domination_suite, growth_indicator, growth_indicator_from_heights, vector_domination,
    GrowthConfig,
};
use sctk_core::mink::{mink_lower_bound_search, mink_upper_bound, mink_upper_bound_enclosure};
use sctk_core::surface::{closed_under_negation, shortest_vector_check, vorobets_radius};
use sctk_core::zexp::{sandwich_check, window_source, z_expansion, Direction, Expansion, ExpansionLimit, WindowConfig};
use sctk_core::{FieldElement, SaddleVector, SurfaceModel};

use crate::config::{Command, OutputFormat, RunConfig};
use crate::error::CliResult;
use crate::output::{float, rational, Artifact};

/// Result of one named check.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CheckStatus {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckStatus {
    fn new(name: &'static str, pass: bool, detail: String) -> Self {
        CheckStatus { name, pass, detail }
    }

    /// `PASS name: detail` or `FAIL name: detail`.
    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// What a command produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub checks: Vec<CheckStatus>,
    pub artifact: Artifact,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Run the configured command against a validated surface.
pub fn run(cfg: &RunConfig, model: &SurfaceModel) -> CliResult<Outcome> {
    let theta = cfg.validate()?;
    match cfg.command {
        Command::Expand => expand(cfg, model, &theta),
        Command::Enumerate => enumerate(cfg, model),
        Command::Mink => mink(cfg, model),
        Command::Verify => verify(cfg, model, &theta),
        Command::Growth => growth(cfg, model, &theta),
    }
}

fn describe(model: &SurfaceModel) -> Value {
    match model {
        SurfaceModel::Origami(o) => json!({"kind": "origami", "squares": o.n(), "volume": model.volume()}),
        SurfaceModel::Orbit(m) => json!({
            "kind": "orbit",
            "field": m.field(),
            "generators": m.generators().len(),
            "seeds": m.seeds().len(),
            "volume": model.volume(),
        }),
    }
}

fn header(cfg: &RunConfig, model: &SurfaceModel) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("format".into(), json!("sctk-format v1"));
    m.insert("command".into(), json!(cfg.command.name()));
    m.insert("surface".into(), describe(model));
    m
}

fn json_artifact(mut head: serde_json::Map<String, Value>, body: Value) -> Artifact {
    if let Value::Object(b) = body {
        head.extend(b);
    }
    Artifact::Json(Value::Object(head))
}

fn components(x: &FieldElement) -> [String; 2] {
    [rational(x.a()), rational(x.b())]
}

fn expansion(model: &SurfaceModel, theta: &Direction, terms: usize) -> CliResult<Expansion> {
    let mut src = window_source(model, theta, WindowConfig::default())?;
    Ok(z_expansion(src.as_mut(), theta, ExpansionLimit::terms(terms))?)
}

fn sandwich_status(model: &SurfaceModel, e: &Expansion, theta: &Direction, bits: u32) -> CliResult<(CheckStatus, Value)> {
    let mu = mink_upper_bound_enclosure(model, bits);
    let report = sandwich_check(&e.records, theta, &mu)?;
    let status = CheckStatus::new(
        "sandwich",
        report.all_pass(),
        format!("{} pairs, {} violations", report.steps.len(), report.violations),
    );
    Ok((status, serde_json::to_value(&report).expect("serializable")))
}

fn expand(cfg: &RunConfig, model: &SurfaceModel, theta: &Direction) -> CliResult<Outcome> {
    let e = expansion(model, theta, cfg.terms)?;
    let (status, sandwich) = sandwich_status(model, &e, theta, cfg.bits)?;
    let mut checks = vec![status];
    if e.records.iter().any(|r| r.provisional) {
        checks.push(CheckStatus::new("certified", false, "some records are provisional".into()));
    }
    let artifact = match cfg.format {
        OutputFormat::Json => json_artifact(
            header(cfg, model),
            json!({"theta": cfg.theta, "expansion": e, "sandwich": sandwich}),
        ),
        OutputFormat::Csv => Artifact::Csv {
            columns: vec!["n", "x_a", "x_b", "y_a", "y_b", "height_approx", "hor_lo", "hor_hi", "provisional"],
            rows: e
                .records
                .iter()
                .map(|r| {
                    let [xa, xb] = components(r.p());
                    let [ya, yb] = components(r.q());
                    vec![
                        r.index.to_string(),
                        xa,
                        xb,
                        ya,
                        yb,
                        float(r.vector.height().to_f64()),
                        float(r.hor.lo_f64()),
                        float(r.hor.hi_f64()),
                        r.provisional.to_string(),
                    ]
                })
                .collect(),
        },
    };
    Ok(Outcome { checks, artifact })
}

fn vector_rows(v: &[SaddleVector]) -> Vec<Vec<String>> {
    v.iter()
        .map(|s| {
            let [xa, xb] = components(&s.x);
            let [ya, yb] = components(&s.y);
            vec![xa, xb, ya, yb, float(s.norm_f64()), s.multiplicity.to_string()]
        })
        .collect()
}

fn enumerate(cfg: &RunConfig, model: &SurfaceModel) -> CliResult<Outcome> {
    let vectors = model.saddle_vectors(cfg.radius, cfg.depth)?;
    let artifact = match cfg.format {
        OutputFormat::Json => json_artifact(
            header(cfg, model),
            json!({"radius": cfg.radius, "count": vectors.len(), "vectors": vectors}),
        ),
        OutputFormat::Csv => Artifact::Csv {
            columns: vec!["x_a", "x_b", "y_a", "y_b", "norm_approx", "multiplicity"],
            rows: vector_rows(&vectors),
        },
    };
    let checks = vec![CheckStatus::new("enumerate", true, format!("{} vectors within radius {}", vectors.len(), cfg.radius))];
    Ok(Outcome { checks, artifact })
}

fn mink_status(cfg: &RunConfig, model: &SurfaceModel, vectors: &[SaddleVector]) -> CliResult<(CheckStatus, Value)> {
    let upper = mink_upper_bound(model);
    let enclosure = mink_upper_bound_enclosure(model, cfg.bits);
    let report = mink_lower_bound_search(vectors, cfg.radius, &cfg.budget.to_budget(), Some(upper))?;
    let hi = enclosure.to_f64_interval().hi;
    let status = CheckStatus::new(
        "mink",
        report.lower_bound <= hi,
        format!("lower {} ≤ upper {}", float(report.lower_bound), float(upper)),
    );
    let body = json!({
        "radius": cfg.radius,
        "vectors": vectors.len(),
        "lower_bound": report.lower_bound,
        "upper_bound": upper,
        "upper_enclosure": {"lo": rational(&enclosure.lo), "hi": rational(&enclosure.hi)},
        "witness": report.witness,
    });
    Ok((status, body))
}

fn mink(cfg: &RunConfig, model: &SurfaceModel) -> CliResult<Outcome> {
    let vectors = model.saddle_vectors(cfg.radius, cfg.depth)?;
    let (status, body) = mink_status(cfg, model, &vectors)?;
    let artifact = match cfg.format {
        OutputFormat::Json => json_artifact(header(cfg, model), body),
        OutputFormat::Csv => {
            let w = &body["witness"];
            Artifact::Csv {
                columns: vec!["radius", "lower_bound", "upper_bound", "shape", "a", "b", "s"],
                rows: vec![vec![
                    float(cfg.radius),
                    float(body["lower_bound"].as_f64().unwrap()),
                    float(body["upper_bound"].as_f64().unwrap()),
                    w["shape"].as_str().unwrap_or_default().to_string(),
                    float(w["a"].as_f64().unwrap()),
                    float(w["b"].as_f64().unwrap()),
                    float(w["s"].as_f64().unwrap()),
                ]],
            }
        }
    };
    Ok(Outcome { checks: vec![status], artifact })
}

/// Least common multiple of the coordinate denominators, so that `m·x`
/// is an integer combination of 1 and √d.
fn denominator_lcm(records: &[SaddleVector]) -> BigInt {
    let mut m = BigInt::one();
    for v in records {
        for x in [&v.x, &v.y] {
            for r in [x.a(), x.b()] {
                m = m.lcm(r.denom());
            }
        }
    }
    m
}

fn verify(cfg: &RunConfig, model: &SurfaceModel, theta: &Direction) -> CliResult<Outcome> {
    let vol = model.volume();
    let mut checks = Vec::new();
    let mut body = serde_json::Map::new();

    let radius = cfg.radius.max(vorobets_radius(&vol) * (1.0 + 1e-9));
    let vectors = model.saddle_vectors(radius, cfg.depth)?;
    let short = shortest_vector_check(&vectors, &vol)?;
    checks.push(CheckStatus::new(
        "vorobets",
        short.pass,
        format!("shortest {} ≤ {}", float(short.shortest_length), float(short.bound)),
    ));
    checks.push(CheckStatus::new(
        "symmetry",
        closed_under_negation(&vectors),
        format!("{} vectors within radius {radius}", vectors.len()),
    ));

    let e = expansion(model, theta, cfg.terms)?;
    let (status, sandwich) = sandwich_status(model, &e, theta, cfg.bits)?;
    checks.push(status);
    body.insert("sandwich".into(), sandwich);

    let recs: Vec<_> = e.records.iter().filter(|r| !r.q().is_zero()).cloned().collect();
    if recs.len() > cfg.holdout {
        let m = denominator_lcm(&recs.iter().map(|r| r.vector.clone()).collect::<Vec<_>>());
        let degree = model.field().degree() as u32;
        let h = convergent_height_check(&recs, degree, &m, cfg.holdout)?;
        checks.push(CheckStatus::new(
            "height",
            h.violations == 0,
            format!("D={degree}, c2 = {}, {} held out, {} violations", float(h.c2), cfg.holdout, h.violations),
        ));
        body.insert("height".into(), serde_json::to_value(&h).expect("serializable"));
    } else {
        checks.push(CheckStatus::new("height", true, format!("skipped: {} records, holdout {}", recs.len(), cfg.holdout)));
    }

    match model {
        SurfaceModel::Orbit(m) => {
            let d = domination_suite(m, cfg.word_length, cfg.radius, cfg.depth)?;
            checks.push(CheckStatus::new(
                "domination",
                d.all_pass() && d.stable,
                format!(
                    "{} words, {} trace failures, {} entry failures, c_emp stable {}",
                    d.words, d.trace_failures, d.entry_failures, d.stable
                ),
            ));
            body.insert("domination".into(), serde_json::to_value(&d).expect("serializable"));
        }
        SurfaceModel::Origami(_) => {
            let c = vector_domination(&vectors)?;
            checks.push(CheckStatus::new(
                "domination",
                c.as_ref().is_some_and(|c| *c == FieldElement::one()),
                format!("c_emp = {}", c.map(|c| c.to_string()).unwrap_or_else(|| "none".into())),
            ));
        }
    }

    let in_radius: Vec<SaddleVector> = vectors.iter().filter(|v| v.norm_f64() <= cfg.radius).cloned().collect();
    let (status, mink) = mink_status(cfg, model, &in_radius)?;
    checks.push(status);
    body.insert("mink".into(), mink);

    let artifact = match cfg.format {
        OutputFormat::Json => {
            body.insert("checks".into(), serde_json::to_value(&checks).expect("serializable"));
            json_artifact(header(cfg, model), Value::Object(body))
        }
        OutputFormat::Csv => Artifact::Csv {
            columns: vec!["check", "status", "detail"],
            rows: checks
                .iter()
                .map(|c| vec![c.name.to_string(), if c.pass { "PASS" } else { "FAIL" }.to_string(), c.detail.clone()])
                .collect(),
        },
    };
    Ok(Outcome { checks, artifact })
}

fn growth(cfg: &RunConfig, model: &SurfaceModel, theta: &Direction) -> CliResult<Outcome> {
    let e = expansion(model, theta, cfg.terms)?;
    let heights: Vec<FieldElement> = e.heights().into_iter().filter(|h| !h.is_zero()).collect();
    let degree = model.field().degree() as u32;
    let gc = GrowthConfig { margin: cfg.margin, tail: cfg.tail };
    let report = if heights.iter().all(|h| h.is_rational() && h.a().is_integer()) {
        let ints: Vec<BigInt> = heights.iter().map(|h| h.a().to_integer()).collect();
        growth_indicator_from_heights(&ints, degree, &gc)?
    } else {
        let logs: Vec<f64> = heights.iter().map(|h| h.to_f64().ln()).collect();
        growth_indicator(&logs, degree, &gc)?
    };
    let detail = format!(
        "window max {} over n={}..{}, threshold {} + margin {}: {}",
        float(report.window_max),
        report.window.0,
        report.window.1,
        float(report.threshold),
        cfg.margin,
        if report.flagged { "flagged" } else { "not flagged" }
    );
    // The detector reports; flagging is not a failed check.
    let checks = vec![CheckStatus::new("growth", true, detail)];
    let artifact = match cfg.format {
        OutputFormat::Json => json_artifact(
            header(cfg, model),
            json!({"theta": cfg.theta, "heights": heights, "report": report}),
        ),
        OutputFormat::Csv => Artifact::Csv {
            columns: vec!["n", "q", "loglog_q_over_n"],
            rows: report
                .points
                .iter()
                .map(|p| vec![p.n.to_string(), heights[p.n - 1].to_string(), float(p.indicator)])
                .collect(),
        },
    };
    Ok(Outcome { checks, artifact })
}
