//! `maxfield`: batch front end for the maxfield-core checks.
//!
//! Exit status: 0 when every check passes, 1 when a check fails (the first
//! counterexample is printed), 2 for invalid input.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use maxfield_core::curve::{count_places, hasse_weil_bound, validate_index, CountMethod, CurveIndex};
use maxfield_core::gaps::{gap_set, genus_by_pick, PlaceClass};
use maxfield_core::gf::FieldCtx;
use maxfield_core::iso::{
    class_count, matching_congruences, partition_classes, phi2, pi_count, subfield_indices, ClassCountMode, CountMode,
};
use maxfield_core::maps::{
    aut_order_for, generated_group_order, h_group, order_on_curve, preserves_relation, preserves_relation_raw,
    standard_map, structural_aut_order, MapKind, MonomialMap,
};
use maxfield_core::verify::{class_structure_violation, gap_violation, sweep, verify_q, Check};
use maxfield_core::Error;

#[derive(Parser)]
#[command(name = "maxfield", version, about = "Checks for the maximal function fields y^(q+1) = x^(2i)(x^2+1)")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlaceArg {
    Inf,
    Zero,
    Alpha,
}

impl From<PlaceArg> for PlaceClass {
    fn from(p: PlaceArg) -> Self {
        match p {
            PlaceArg::Inf => PlaceClass::Infinity,
            PlaceArg::Zero => PlaceClass::Zero,
            PlaceArg::Alpha => PlaceClass::Alpha,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Fast,
    Naive,
}

#[derive(Subcommand)]
enum Command {
    /// Isomorphism classes of the indices modulo d and the class count.
    Classify {
        #[arg(long)]
        d: u64,
    },
    /// Isomorphism classes for q with automorphism orders and subfield profiles.
    Classes {
        #[arg(long)]
        q: u64,
    },
    /// Gap sequences at the distinguished places.
    Gaps {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        #[arg(long, value_enum)]
        place: Option<PlaceArg>,
    },
    /// Number of rational places and the maximality verdict.
    Count {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        #[arg(long, value_enum, default_value_t = MethodArg::Fast)]
        method: MethodArg,
    },
    /// Every applicable standard map between F_i and F_j (j defaults to i).
    Maps {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        #[arg(long, allow_hyphen_values = true)]
        j: Option<i64>,
    },
    /// Order of the automorphism group.
    Aut {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
    },
    /// All checks for one q.
    Verify {
        #[arg(long)]
        q: u64,
    },
    /// Counting-formula cross-checks for every odd d in [7, max-d].
    Sweep {
        #[arg(long = "max-d")]
        max_d: u64,
    },
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    params: Map<String, Value>,
    results: Value,
    checks: Vec<Check>,
    #[serde(skip)]
    lines: Vec<String>,
}

impl Report {
    fn new(command: &'static str, params: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        Self { command, params, results: Value::Null, checks: Vec::new(), lines: Vec::new() }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(name, pass, detail));
    }
}

type Outcome = maxfield_core::Result<Report>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify { d } => classify(d),
        Command::Classes { q } => classes(q),
        Command::Gaps { q, i, place } => gaps(q, i, place),
        Command::Count { q, i, method } => count(q, i, method),
        Command::Maps { q, i, j } => maps(q, i, j),
        Command::Aut { q, i } => aut(q, i),
        Command::Verify { q } => verify(q),
        Command::Sweep { max_d } => run_sweep(max_d),
    };
    match result {
        Ok(report) => emit(&report, cli.format),
        Err(e @ Error::Internal(_)) => {
            eprintln!("check failed: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("invalid input: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(report: &Report, format: Format) -> ExitCode {
    let mut body = String::new();
    match format {
        Format::Json => {
            body.push_str(&serde_json::to_string_pretty(report).expect("report serializes"));
            body.push('\n');
        }
        Format::Text => {
            for l in &report.lines {
                body.push_str(l);
                body.push('\n');
            }
            if !report.checks.is_empty() {
                body.push('\n');
                for c in &report.checks {
                    let tag = if c.pass { "PASS" } else { "FAIL" };
                    body.push_str(&format!("[{tag}] {}: {}\n", c.name, c.detail));
                }
            }
        }
    }
    // a closed pipe downstream is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
    match report.checks.iter().find(|c| !c.pass) {
        Some(c) => {
            eprintln!("check failed: {}: {}", c.name, c.detail);
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}

fn classify(d: u64) -> Outcome {
    let mut r = Report::new("classify", json!({ "d": d }));
    let p = partition_classes(d)?;
    let formula = class_count(d, ClassCountMode::Formula)?;
    let enumerated = class_count(d, ClassCountMode::Enumeration)?;
    let pi = pi_count(d, CountMode::ClosedForm)?;
    let ph = phi2(d, CountMode::ClosedForm)?;
    r.line(format!("d = {d}: {} classes", p.classes.len()));
    for c in &p.classes {
        r.line(format!("  {c:?}"));
    }
    r.line(format!("pi(d) = {pi}, phi2(d) = {ph}"));
    r.line(format!("N(d) = {formula} (formula), {enumerated} (enumeration)"));
    r.check("class count formula equals enumeration", formula == enumerated, format!("{formula} vs {enumerated}"));
    let structure = class_structure_violation(d)?;
    r.check("class structure", structure.is_none(), structure.unwrap_or_else(|| "sizes 1, 2 and 3 as expected".into()));
    r.results = json!({
        "classes": p.classes,
        "singleton_indices": p.singleton_indices,
        "pair_class": p.pair_class,
        "pi": pi,
        "phi2": ph,
        "class_count_formula": formula,
        "class_count_enumeration": enumerated,
    });
    Ok(r)
}

fn classes(q: u64) -> Outcome {
    let mut r = Report::new("classes", json!({ "q": q }));
    let d = maxfield_core::curve::d_for_q(q)?;
    let p = partition_classes(d)?;
    let mut rows = Vec::new();
    r.line(format!("q = {q}, d = {d}: {} classes", p.classes.len()));
    for class in &p.classes {
        let c = validate_index(q, class[0] as i64)?;
        let (order, case) = aut_order_for(&c);
        let profile = subfield_indices(class[0], d)?;
        r.line(format!(
            "  {class:?}: aut order {order} ({}), structural {}, subfields F_{:?} {:?}",
            case.describe(),
            structural_aut_order(&c),
            profile.fj_indices,
            profile.pattern
        ));
        rows.push(json!({
            "members": class,
            "aut_order": order,
            "aut_case": case.describe(),
            "structural_aut_order": structural_aut_order(&c),
            "subfield_indices": profile.fj_indices,
            "subfield_pattern": profile.pattern,
        }));
    }
    r.results = json!({ "d": d, "classes": rows });
    Ok(r)
}

fn gaps(q: u64, i: i64, place: Option<PlaceArg>) -> Outcome {
    let mut r = Report::new("gaps", json!({ "q": q, "i": i, "place": place.map(|p| PlaceClass::from(p).name()) }));
    let c = validate_index(q, i)?;
    let genus = genus_by_pick(&c)?;
    let places: Vec<PlaceClass> = match place {
        Some(p) => vec![p.into()],
        None => PlaceClass::ALL.to_vec(),
    };
    r.line(format!("{c}, genus {genus}"));
    let mut out = Map::new();
    for p in places {
        let g = gap_set(&c, p)?;
        r.line(format!("G_{} ({} gaps): {:?}", p.name(), g.gaps.len(), g.gaps));
        let v = gap_violation(&c, p)?;
        r.check(&format!("gap sequence at {}", p.name()), v.is_none(), v.unwrap_or_else(|| "ok".into()));
        out.insert(p.name().to_string(), json!({ "gaps": g.gaps, "count": g.gaps.len() }));
    }
    r.results = json!({ "i": c.i, "d": c.d, "genus": genus, "places": out });
    Ok(r)
}

fn count(q: u64, i: i64, method: MethodArg) -> Outcome {
    let name = match method {
        MethodArg::Fast => "fast",
        MethodArg::Naive => "naive",
    };
    let mut r = Report::new("count", json!({ "q": q, "i": i, "method": name }));
    let c = validate_index(q, i)?;
    let ctx = FieldCtx::new(q)?;
    let m = match method {
        MethodArg::Fast => CountMethod::Fast,
        MethodArg::Naive => CountMethod::Naive,
    };
    let n = count_places(&ctx, &c, m)?;
    let bound = hasse_weil_bound(q);
    r.line(format!("{c}: N = {n}, bound q^2 + 1 + 2gq = {bound}"));
    r.line(if n == bound { "maximal" } else { "not maximal" });
    r.check("maximal", n == bound, format!("N = {n}, bound {bound}"));
    r.results = json!({ "i": c.i, "d": c.d, "places": n, "bound": bound, "maximal": n == bound });
    Ok(r)
}

fn map_entry(ctx: &FieldCtx, label: String, m: &MonomialMap, preserves: bool, order: Option<u64>) -> Value {
    json!({ "map": label, "formula": m.render(ctx), "preserves_relation": preserves, "order": order })
}

fn maps(q: u64, i: i64, j: Option<i64>) -> Outcome {
    let mut r = Report::new("maps", json!({ "q": q, "i": i, "j": j }));
    let ci = validate_index(q, i)?;
    let cj = validate_index(q, j.unwrap_or(i))?;
    let ctx = FieldCtx::new(q)?;
    let d = ci.d;
    let mut entries = Vec::new();
    r.line(format!("maps between {ci} and {cj}"));
    for cong in matching_congruences(ci.i as i64, cj.i as i64, d) {
        let m = standard_map(&ctx, MapKind::Iso { congruence: cong, i: ci.i as i64, j: cj.i as i64 })?;
        let ok = preserves_relation(&ctx, &m, &cj, &ci)?;
        let label = format!("iso ({}) F_{} -> F_{}", cong.number(), ci.i, cj.i);
        r.line(format!("  {label}: {} [{}]", m.render(&ctx), if ok { "ok" } else { "FAILS" }));
        r.check(&label, ok, "relation preserved");
        entries.push(map_entry(&ctx, label, &m, ok, None));
    }
    if ci.i == cj.i {
        automorphism_entries(&ctx, &ci, &mut r, &mut entries)?;
    }
    if entries.is_empty() {
        r.line("  no congruence links these indices");
    }
    r.results = json!({ "i": ci.i, "j": cj.i, "d": d, "maps": entries });
    Ok(r)
}

fn automorphism_entries(
    ctx: &FieldCtx,
    c: &CurveIndex,
    r: &mut Report,
    entries: &mut Vec<Value>,
) -> maxfield_core::Result<()> {
    let d = c.d as i64;
    let i = c.exponent();
    let h = h_group(ctx);
    let mut h_ok = true;
    for m in &h {
        h_ok &= preserves_relation(ctx, m, c, c)?;
    }
    r.line(format!("  H: {} elements, all preserve the relation: {h_ok}", h.len()));
    r.check(
        "H elements preserve the relation",
        h_ok && h.len() as u64 == 2 * (c.q + 1),
        format!("{} elements", h.len()),
    );
    let mut autos: Vec<(String, MapKind, u64)> = Vec::new();
    if (c.i * c.i + c.i + 1).is_multiple_of(c.d) {
        autos.push(("omega".into(), MapKind::Omega { i }, 3));
    }
    if c.i == 1 {
        autos.push(("pi".into(), MapKind::Pi, 2));
        autos.push(("pi'".into(), MapKind::PiPrime, 2));
    }
    for (label, kind, expected) in autos {
        let m = standard_map(ctx, kind)?;
        let ok = preserves_relation(ctx, &m, c, c)?;
        let order = if ok { Some(order_on_curve(ctx, &m, c, None)?) } else { None };
        r.line(format!("  {label}: {} order {order:?}", m.render(ctx)));
        r.check(&format!("{label} has order {expected}"), order == Some(expected), format!("order {order:?}"));
        entries.push(map_entry(ctx, label, &m, ok, order));
    }
    {
        let m_exp = 1i64;
        let shift = standard_map(ctx, MapKind::Shift { m: m_exp })?;
        let raw = m_exp * d + i;
        let ok = preserves_relation_raw(ctx, &shift, raw, i)?;
        let label = format!("shift F_{raw} -> F_{i}");
        r.line(format!("  {label}: {} [{}]", shift.render(ctx), if ok { "ok" } else { "FAILS" }));
        r.check(&label, ok, "relation preserved");
        entries.push(map_entry(ctx, label, &shift, ok, None));
        let reflect = standard_map(ctx, MapKind::Reflect { m: m_exp })?;
        let raw = m_exp * d - i - 1;
        let ok = preserves_relation_raw(ctx, &reflect, raw, i)?;
        let label = format!("reflect F_{raw} -> F_{i}");
        r.line(format!("  {label}: {} [{}]", reflect.render(ctx), if ok { "ok" } else { "FAILS" }));
        r.check(&label, ok, "relation preserved");
        entries.push(map_entry(ctx, label, &reflect, ok, None));
    }
    let neg = standard_map(ctx, MapKind::NegativeControl)?;
    let ok = preserves_relation(ctx, &neg, c, c)?;
    r.line(format!("  negative control (x, xy): preserves {ok}"));
    r.check("negative control is rejected", !ok, "(x, xy)");
    entries.push(map_entry(ctx, "negative control".into(), &neg, ok, None));
    Ok(())
}

fn aut(q: u64, i: i64) -> Outcome {
    let mut r = Report::new("aut", json!({ "q": q, "i": i }));
    let c = validate_index(q, i)?;
    let (order, case) = aut_order_for(&c);
    let structural = structural_aut_order(&c);
    r.line(format!("{c}: automorphism group order {order}, case \"{}\"", case.describe()));
    r.line(format!("|H_i| [G : H_i] = {structural}"));
    let generated = if c.is_special() {
        None
    } else {
        let ctx = FieldCtx::new(q)?;
        let g = generated_group_order(&ctx, &c, 64 * (q as usize + 1))?;
        r.line(format!("group generated by the explicit automorphisms: {g} elements"));
        r.check("generated group has the structural order", g == structural, format!("{g} vs {structural}"));
        Some(g)
    };
    r.results = json!({
        "i": c.i,
        "d": c.d,
        "order": order,
        "case": case.describe(),
        "structural_order": structural,
        "generated_order": generated,
    });
    Ok(r)
}

fn verify(q: u64) -> Outcome {
    let mut r = Report::new("verify", json!({ "q": q }));
    let checks = verify_q(q)?;
    let passed = checks.iter().filter(|c| c.pass).count();
    r.line(format!("q = {q}: {passed} of {} checks passed", checks.len()));
    r.results = json!({ "passed": passed, "total": checks.len() });
    r.checks = checks;
    Ok(r)
}

fn run_sweep(max_d: u64) -> Outcome {
    let mut r = Report::new("sweep", json!({ "max_d": max_d }));
    if max_d < 7 {
        return Err(Error::InvalidParameter(format!("max-d = {max_d} must be at least 7")));
    }
    let (rows, checks) = sweep(max_d)?;
    r.line(format!("{} odd moduli in [7, {max_d}]", rows.len()));
    r.line(format!("{:>8} {:>6} {:>10} {:>8}", "d", "pi", "phi2", "N(d)"));
    for row in &rows {
        r.line(format!("{:>8} {:>6} {:>10} {:>8}", row.d, row.pi, row.phi2, row.classes));
    }
    r.results = json!({ "rows": rows });
    r.checks = checks;
    Ok(r)
}
