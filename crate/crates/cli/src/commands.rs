use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use gcnn_vc::bounds::{required_group_size, BoundReport};
use gcnn_vc::io::{from_json, CertificateJson, FunctionJson, GroupCache, SynthJson};
use gcnn_vc::orders::{
    build_complete_orders, completeness_lower_bound, is_complete, middle_layer_injective, unseparated,
};
use gcnn_vc::scalar::parse_rational;
use gcnn_vc::shatter::{check_order_criterion, is_shattered, order_set};
use gcnn_vc::synth::{synth_kernel, verify_synth, SynthConfig, SynthMode, SynthReport};
use gcnn_vc::{FiniteGroup, Rational, RationalFunction, RationalMeasure};
use serde::Serialize;

use crate::output::{read_input, write_atomic, Run};
use crate::{BoundsArgs, Failure, GroupBuildArgs, GroupValidateArgs, OrdersArgs, SynthArgs, VerifyArgs};

/// Above this the exhaustive completeness scan is skipped.
const ORDERS_VERIFY_MAX_M: u32 = 20;
const SYNTH_DEFAULT_MAX_M: usize = 8;
/// Certificates list every dichotomy, so `m` stays small.
const VERIFY_MAX_M: usize = 24;

#[derive(Debug, Serialize)]
struct OrdersReport {
    m: u32,
    rankings: usize,
    minimum: u128,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    complete: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unseparated: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    middle_layer_separators: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    minimal: Option<bool>,
}

pub fn orders(args: &OrdersArgs) -> Result<(), Failure> {
    let mut run = Run::new("orders", args, &args.out);
    let set = build_complete_orders(args.m as usize)?;
    run.lap("build");
    let verified = args.m <= ORDERS_VERIFY_MAX_M;
    let mut report = OrdersReport {
        m: args.m,
        rankings: set.len(),
        minimum: completeness_lower_bound(args.m as usize),
        verified,
        complete: None,
        unseparated: None,
        middle_layer_separators: None,
        minimal: None,
    };
    if verified {
        let complete = is_complete(&set);
        report.complete = Some(complete);
        if !complete {
            report.unseparated = Some(unseparated(&set));
        }
        let middle = middle_layer_injective(&set);
        report.middle_layer_separators = middle;
        report.minimal = Some(middle.is_some() && set.len() as u128 == report.minimum);
        run.lap("verify");
    }
    run.write_json("orders.json", &set)?;
    run.write_json("orders_report.json", &report)?;
    run.finish()?;
    match report.complete {
        Some(c) => println!("m = {}: {} rankings, complete = {c}", args.m, set.len()),
        None => println!("m = {}: {} rankings, completeness not checked", args.m, set.len()),
    }
    if report.complete == Some(false) || report.minimal == Some(false) {
        return Err(Failure::invariant("constructed order set failed its own checks"));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct SynthVerifyReport {
    #[serde(flatten)]
    synthesis: SynthReport,
    shattered: bool,
    witnessed: usize,
    order_criterion: bool,
    strict_rankings: usize,
    required_strict_rankings: u128,
}

fn parse_scalar(name: &str, text: &str) -> Result<Rational, Failure> {
    parse_rational(text).ok_or_else(|| Failure::usage(format!("--{name}: cannot parse {text:?} as a rational")))
}

pub fn synth(args: &SynthArgs) -> Result<(), Failure> {
    let m = args.m;
    if m < 2 {
        return Err(Failure::usage("synth needs --m of at least 2"));
    }
    if m > SYNTH_DEFAULT_MAX_M && !args.allow_large {
        return Err(Failure::usage(format!("--m {m} exceeds {SYNTH_DEFAULT_MAX_M}; pass --allow-large to proceed")));
    }
    let b = parse_scalar("b", &args.b)?;
    let c = parse_scalar("c", &args.c)?;
    let mut run = Run::new("synth", args, &args.out);
    let group = Arc::new(FiniteGroup::from_spec_str(&args.group)?);
    let required = required_group_size(m as u64, args.mode)?;
    if (group.order() as u128) < required {
        return Err(Failure {
            code: 3,
            message: format!(
                "{} has order {}; {} mode with m = {m} requires |G| ≥ {required}",
                args.group,
                group.order(),
                args.mode.as_str()
            ),
        });
    }
    let g = match args.mode {
        SynthMode::OrderTwo => group.find_order_two_element(),
        SynthMode::General => group.find_order_ge3_element(),
    }
    .ok_or_else(|| Failure {
        code: 4,
        message: match args.mode {
            SynthMode::OrderTwo => format!("{} has no element of order two; try --mode general", args.group),
            SynthMode::General => format!("{} has no element g with g^2 != e", args.group),
        },
    })?;
    run.lap("group");

    let orders = build_complete_orders(m)?;
    let config = SynthConfig { b, c, m, g, orders: orders.clone(), mode: args.mode };
    let synthesis = synth_kernel(group.clone(), &config)?;
    run.lap("synthesize");

    let checks = verify_synth(&synthesis, &orders)?;
    let fs = synthesis.functions();
    let mu = RationalMeasure::counting(group.clone());
    let cert = is_shattered(&synthesis.kernel, &fs, &mu)?;
    let observed = order_set(&synthesis.kernel, &fs, &mu)?;
    let criterion = is_complete(&observed);
    run.lap("verify");

    let report = SynthVerifyReport {
        synthesis: checks,
        shattered: cert.shattered,
        witnessed: cert.witnessed(),
        order_criterion: criterion,
        strict_rankings: observed.strict_count(),
        required_strict_rankings: completeness_lower_bound(m),
    };
    let mut cert_json = CertificateJson::from_certificate(&cert);
    cert_json.group = Some(group.label().to_string());
    let functions: Vec<FunctionJson> = fs.iter().map(FunctionJson::from_function).collect();

    run.write_json("synth.json", &SynthJson::from_synthesis(&synthesis))?;
    run.write_json("kernel.json", &FunctionJson::from_function(&synthesis.kernel))?;
    run.write_json("functions.json", &functions)?;
    run.write_json("verify_report.json", &report)?;
    run.write_json("certificate.json", &cert_json)?;
    run.finish()?;

    println!(
        "{}: m = {m}, {} mode, g = {g}, {}/{} dichotomies witnessed, shattered = {}",
        group.label(),
        args.mode.as_str(),
        cert.witnessed(),
        cert.entries.len(),
        cert.shattered
    );
    for check in report.synthesis.checks.iter().filter(|c| !c.passed) {
        eprintln!("check {} failed: {}", check.name, check.detail.as_deref().unwrap_or(""));
    }
    let ok = cert.shattered
        && report.synthesis.all_passed()
        && criterion
        && report.strict_rankings as u128 >= report.required_strict_rankings;
    if !ok {
        return Err(Failure::invariant("synthesized kernel failed verification"));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct Verdict {
    m: usize,
    shattered: bool,
    witnessed: usize,
    order_criterion: bool,
    agree: bool,
}

fn load_functions(path: &Path, run: &mut Run, cache: &mut GroupCache) -> Result<Vec<RationalFunction>, Failure> {
    let bytes = read_input(path)?;
    run.input(path, &bytes);
    let text = String::from_utf8(bytes).map_err(|_| Failure::usage(format!("{} is not UTF-8", path.display())))?;
    let json: Vec<FunctionJson> = from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    json.iter().map(|f| f.to_function(cache).map_err(Failure::from)).collect()
}

pub fn verify(args: &VerifyArgs) -> Result<(), Failure> {
    let mut run = Run::new("verify", args, &args.out);
    let mut cache = GroupCache::new();
    let kernel_bytes = read_input(&args.kernel)?;
    run.input(&args.kernel, &kernel_bytes);
    let kernel_text = String::from_utf8(kernel_bytes)
        .map_err(|_| Failure::usage(format!("{} is not UTF-8", args.kernel.display())))?;
    let kernel_json: FunctionJson =
        from_json(&kernel_text).map_err(|e| Failure::usage(format!("{}: {e}", args.kernel.display())))?;
    let kernel = kernel_json.to_function(&mut cache)?;
    let fs = load_functions(&args.functions, &mut run, &mut cache)?;
    if fs.is_empty() || fs.len() > VERIFY_MAX_M {
        return Err(Failure::usage(format!("need between 1 and {VERIFY_MAX_M} functions, got {}", fs.len())));
    }
    let mu = RationalMeasure::counting(kernel.group().clone());
    run.lap("load");

    let cert = is_shattered(&kernel, &fs, &mu)?;
    let criterion = check_order_criterion(&kernel, &fs, &mu)?;
    run.lap("verify");

    let verdict = Verdict {
        m: fs.len(),
        shattered: cert.shattered,
        witnessed: cert.witnessed(),
        order_criterion: criterion,
        agree: cert.shattered == criterion,
    };
    let mut cert_json = CertificateJson::from_certificate(&cert);
    cert_json.group = Some(kernel.group().label().to_string());
    run.write_json("certificate.json", &cert_json)?;
    run.write_json("verdict.json", &verdict)?;
    run.finish()?;

    println!(
        "m = {}: {}/{} dichotomies witnessed, shattered = {}, order criterion = {}",
        verdict.m,
        verdict.witnessed,
        cert.entries.len(),
        verdict.shattered,
        verdict.order_criterion
    );
    if !verdict.agree {
        return Err(Failure::invariant("shattering verdict and order criterion disagree"));
    }
    Ok(())
}

/// Group order and shattered size recorded by a certificate file. The group
/// comes from the certificate or, failing that, a `synth.json` next to it.
fn achieved_entry(path: &Path) -> Result<(u64, usize), Failure> {
    let bad = |e: String| Failure::usage(format!("{}: {e}", path.display()));
    let text = String::from_utf8(read_input(path)?).map_err(|_| bad("not UTF-8".into()))?;
    let cert: CertificateJson = from_json(&text).map_err(|e| bad(e.to_string()))?;
    let spec = match cert.group {
        Some(spec) => spec,
        None => {
            let sibling = path.parent().unwrap_or(Path::new(".")).join("synth.json");
            let text = std::fs::read_to_string(&sibling)
                .map_err(|_| bad("certificate names no group and there is no synth.json beside it".into()))?;
            from_json::<SynthJson>(&text).map_err(|e| bad(e.to_string()))?.group
        }
    };
    let n = spec.parse::<gcnn_vc::GroupSpec>()?.order()? as u64;
    Ok((n, if cert.shattered { cert.m } else { 0 }))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.4}"))
}

pub fn bounds(args: &BoundsArgs) -> Result<(), Failure> {
    let mut ns: Vec<u64> = Vec::new();
    for part in args.n.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let n: u64 = part.parse().map_err(|_| Failure::usage(format!("--n: {part:?} is not a group order")))?;
        if n == 0 {
            return Err(Failure::usage("--n: group orders start at 1"));
        }
        ns.push(n);
    }
    let mut achieved: BTreeMap<u64, usize> = BTreeMap::new();
    for path in &args.achieved {
        let (n, m) = achieved_entry(path)?;
        let best = achieved.entry(n).or_insert(0);
        *best = (*best).max(m);
    }
    for n in achieved.keys() {
        if !ns.contains(n) {
            ns.push(*n);
        }
    }
    let with_achieved = !args.achieved.is_empty();

    let mut header = vec![
        "n",
        "implicit_upper",
        "simple_upper",
        "simple_upper_ceil",
        "refined_upper",
        "lower_general",
        "lower_order_two",
    ];
    if with_achieved {
        header.push("achieved_m");
    }
    let mut rows: Vec<Vec<String>> = Vec::new();
    for &n in &ns {
        let r = BoundReport::new(n)?;
        let mut row = vec![
            r.n.to_string(),
            r.implicit_upper.to_string(),
            format!("{:.4}", r.simple_upper),
            r.simple_upper_ceil.to_string(),
            fmt_opt(r.refined_upper),
            fmt_opt(r.lower_general),
            fmt_opt(r.lower_order_two),
        ];
        if with_achieved {
            row.push(achieved.get(&n).map_or_else(|| "-".into(), |m| m.to_string()));
        }
        rows.push(row);
    }

    let csv_text = to_csv(&header, &rows)?;
    if let Some(path) = &args.csv {
        write_atomic(path, csv_text.as_bytes())?;
    }
    if args.print_csv {
        print!("{csv_text}");
    } else {
        print!("{}", aligned(&header, &rows));
    }
    Ok(())
}

/// Missing values are empty fields in CSV.
fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Failure::internal(e.to_string()))?;
    for row in rows {
        w.write_record(row.iter().map(|v| if v == "-" { "" } else { v.as_str() }))
            .map_err(|e| Failure::internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::internal(e.to_string()))
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        padded.join("  ") + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

#[derive(Debug, Serialize)]
struct GroupTables {
    spec: String,
    order: usize,
    identity: usize,
    abelian: bool,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

pub fn group_build(args: &GroupBuildArgs) -> Result<(), Failure> {
    let g = FiniteGroup::from_spec_str(&args.spec)?;
    let tables = GroupTables {
        spec: g.label().to_string(),
        order: g.order(),
        identity: g.identity(),
        abelian: g.is_abelian(),
        mul: g.elements().map(|a| g.elements().map(|b| g.mul(a, b)).collect()).collect(),
        inv: g.elements().map(|a| g.inv(a)).collect(),
    };
    let mut text = serde_json::to_string_pretty(&tables).map_err(|e| Failure::internal(e.to_string()))?;
    text.push('\n');
    match &args.out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn group_validate(args: &GroupValidateArgs) -> Result<(), Failure> {
    let g = FiniteGroup::from_spec_str(&args.spec)?;
    let report = g.validate(args.seed);
    println!("{}", serde_json::to_string_pretty(&report).map_err(|e| Failure::internal(e.to_string()))?);
    if !report.all_passed() {
        return Err(Failure::invariant(format!("{} fails the group axioms", args.spec)));
    }
    Ok(())
}
