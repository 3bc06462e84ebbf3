//! Command handlers. Each returns the text to print on stdout.

use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};
use trailcount::chain::{
    calibrate, chain_distribution, mixing_report, tv_to_uniform, PermIndex, CALIBRATION_DEGREES, CALIBRATION_EPS,
};
use trailcount::counting::{compose_vr, count_closed, count_vr, flatten};
use trailcount::gadgets::{self, formula_oracle, Blueprint, Expected};
use trailcount::graph::{map_from_json, map_to_json, MapDocument, MixedMap, Mode, RouteType};
use trailcount::kotzig::{count_atrails_plane, face_structure};
use trailcount::reductions::{
    ap_instance, count_et_via_crt, estimate_et, expand_to_4regular, planarize, to_atrail_instance,
    ExactNetworkOracle, Threshold,
};
use trailcount::signature::synth::{plan_graph_gadget, plan_map_gadget, build_recipe, replay_signature, GraphSynthOptions};
use trailcount::signature::{
    closure_sample, glue_build, glue_signature, region_classify, region_constants, region_scan, signature_of,
    ScanOptions, Signature, SignatureReport,
};

use crate::config::RunConfig;
use crate::{ChainArgs, ChainSub, Command, CountMode, ExperimentCmd, GadgetCmd, GadgetKind, GadgetParams, ReduceCmd, SigCmd};

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments: exit code 2.
    Usage(String),
    /// The operation itself failed: exit code 1.
    Domain(String),
}

impl From<trailcount::Error> for Failure {
    fn from(e: trailcount::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Out = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn read_map(path: &Path) -> Result<MixedMap, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    Ok(map_from_json(&text)?)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

/// The map itself, or the path it was written to.
fn emit_map(m: &MixedMap, output: Option<&PathBuf>) -> Result<Value, Failure> {
    match output {
        Some(p) => {
            write_text(p, &(map_to_json(m) + "\n"))?;
            Ok(json!(p.display().to_string()))
        }
        None => Ok(serde_json::to_value(MapDocument::from_map(m)).expect("map documents serialize")),
    }
}

/// Fractions `a/b`, integers, and decimals such as `0.34` or `1e-3`, all exact.
pub fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    let bad = || usage(format!("not a number: {s:?}"));
    let t = s.trim();
    if t.contains('/') {
        return t.parse::<BigRational>().map_err(|_| bad());
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int}{frac}");
    let n: BigUint = if all.is_empty() { BigUint::default() } else { all.parse().map_err(|_| bad())? };
    let scale = exp - frac.len() as i32;
    let ten = BigUint::from(10u32);
    let mut q = BigRational::from_integer(n.into());
    if scale >= 0 {
        q *= BigRational::from_integer(ten.pow(scale as u32).into());
    } else {
        q /= BigRational::from_integer(ten.pow((-scale) as u32).into());
    }
    Ok(if neg { -q } else { q })
}

fn parse_signature(a: &str, b: &str, c: &str) -> Result<Signature, Failure> {
    Signature::new(parse_rational(a)?, parse_rational(b)?, parse_rational(c)?).map_err(|e| usage(e.to_string()))
}

fn parse_signature_list(s: &str) -> Result<Signature, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b, c] => parse_signature(a, b, c),
        _ => Err(usage(format!("expected a gadget file or a,b,c: {s:?}"))),
    }
}

fn sig_json(s: &Signature) -> Value {
    serde_json::to_value(SignatureReport::from(s)).expect("reports serialize")
}

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Out {
    match cmd {
        Command::Count { file, mode } => count(file, *mode),
        Command::Gadget(GadgetCmd::Build(p)) => gadget_build(p),
        Command::Gadget(GadgetCmd::Verify(p)) => gadget_verify(p, cfg),
        Command::Reduce(r) => reduce(r, cfg),
        Command::Kotzig { file } => kotzig(file),
        Command::Sig(s) => sig(s, cfg),
        Command::Experiment(e) => experiment(e, cfg),
        Command::Chain(c) => chain(c, cfg),
    }
}

fn count(file: &Path, mode: CountMode) -> Out {
    let m = read_map(file)?;
    let mode = match mode {
        CountMode::Et => Mode::General,
        CountMode::Atrail => Mode::ATrail,
    };
    if m.num_externals() == 0 {
        let c = count_closed(&m, mode)?;
        return Ok(render(&json!({ "mode": mode.name(), "count": c.to_string() })));
    }
    let t = count_vr(&m, mode)?;
    Ok(render(&json!({
        "mode": mode.name(),
        "externals": m.num_externals(),
        "table": t.entries(),
        "total": t.total().to_string(),
    })))
}

fn need(v: Option<usize>, name: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| usage(format!("--{name} is required")))
}

fn blueprint(p: &GadgetParams) -> Result<Option<Blueprint>, Failure> {
    Ok(Some(match p.kind {
        GadgetKind::Xyy => Blueprint::Xyy { k: need(p.k, "k")? },
        GadgetKind::Oxy => Blueprint::Oxy { p: need(p.p, "p")?, k: need(p.k, "k")? },
        GadgetKind::Q => Blueprint::Q { d: need(p.d, "d")?, p: need(p.p, "p")? },
        GadgetKind::Deg4map => Blueprint::Deg4map,
        GadgetKind::Shuffle => Blueprint::Shuffle { d: need(p.d, "d")?, layers: need(p.layers, "layers")? },
        GadgetKind::Crossover => Blueprint::Crossover { p: need(p.p, "p")? },
        GadgetKind::Smg | GadgetKind::Sgg => return Ok(None),
    }))
}

fn build_gadget(p: &GadgetParams) -> Result<MixedMap, Failure> {
    Ok(match blueprint(p)? {
        Some(bp) => gadgets::build(&bp)?,
        None if p.kind == GadgetKind::Smg => gadgets::smg(),
        None => gadgets::sgg(),
    })
}

fn gadget_build(p: &GadgetParams) -> Out {
    Ok(map_to_json(&build_gadget(p)?) + "\n")
}

fn triple_json(t: &[BigUint; 3]) -> Value {
    json!(t.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn gadget_verify(p: &GadgetParams, cfg: &RunConfig) -> Out {
    let name = format!("{:?}", p.kind).to_lowercase();
    let report = match (p.kind, blueprint(p)?) {
        (GadgetKind::Shuffle, Some(Blueprint::Shuffle { d, layers })) => {
            let c = trailcount::chain::gadget_chain_check(d, layers, cfg.budget)?;
            json!({ "gadget": name, "d": d, "layers": layers, "pass": c.pass, "mismatches": c.mismatches })
        }
        (GadgetKind::Q, Some(bp @ Blueprint::Q { d, p })) => {
            let Expected::Residues { modulus, permutation } = formula_oracle(&bp)? else {
                unreachable!("Q has residue expectations")
            };
            let table = compose_vr(&gadgets::build_q(d, p)?)?;
            let mut mismatches = Vec::new();
            for (ty, r) in table.residues(modulus) {
                let want = if ty.as_permutation().is_some() { permutation } else { 0 };
                if r != want {
                    mismatches.push(format!("{ty}: {r}, expected {want}"));
                }
            }
            json!({
                "gadget": name, "d": d, "p": p, "modulus": modulus, "permutation_residue": permutation,
                "pass": mismatches.is_empty(), "mismatches": mismatches,
            })
        }
        (GadgetKind::Smg | GadgetKind::Sgg, _) => {
            let m = build_gadget(p)?;
            let want = if p.kind == GadgetKind::Smg { Signature::smg() } else { Signature::sgg() };
            let got = signature_of(&m)?;
            json!({ "gadget": name, "pass": got == want, "expected": sig_json(&want), "actual": sig_json(&got) })
        }
        (_, Some(bp)) => {
            let want = match formula_oracle(&bp) {
                Ok(Expected::Triple(t)) => t,
                _ => return Err(Failure::Domain(format!("{name} has no closed form to verify against"))),
            };
            let got = count_vr(&gadgets::build(&bp)?, Mode::General)?.triple()?;
            json!({ "gadget": name, "pass": got == want, "expected": triple_json(&want), "actual": triple_json(&got) })
        }
        (_, None) => unreachable!("only SMG and SGG lack blueprints"),
    };
    Ok(render(&report))
}

fn reduce(r: &ReduceCmd, cfg: &RunConfig) -> Out {
    let report = match r {
        ReduceCmd::To4regular { io, p, primes, test_mode } => {
            let g = read_map(&io.input)?;
            let threshold = if *test_mode { Threshold::TestMode } else { Threshold::AboveFour };
            match (p, primes.as_deref()) {
                (None, Some("auto")) => serde_json::to_value(count_et_via_crt(&g, threshold)?).expect("serializes"),
                (Some(p), None) => {
                    let e = expand_to_4regular(&g, *p, threshold)?;
                    let m = flatten(&e.network)?;
                    json!({
                        "p": p,
                        "replaced": e.replaced.iter().map(|&v| g.vertex_id(v)).collect::<Vec<_>>(),
                        "profile": e.profile,
                        "vertices": m.num_vertices(),
                        "map": emit_map(&m, io.output.as_ref())?,
                    })
                }
                _ => return Err(usage("give exactly one of --p P or --primes auto")),
            }
        }
        ReduceCmd::Planar { io, p } => {
            let g = read_map(&io.input)?;
            let pl = planarize(&g, *p, cfg.seed)?;
            json!({
                "p": p,
                "seed": cfg.seed,
                "attempts": pl.attempts,
                "crossings": pl.crossings,
                "vertices": pl.map.num_vertices(),
                "map": emit_map(&pl.map, io.output.as_ref())?,
            })
        }
        ReduceCmd::Atrails { io } => {
            let g = read_map(&io.input)?;
            let m = to_atrail_instance(&g)?;
            json!({
                "factor": (BigUint::one() << g.num_vertices()).to_string(),
                "vertices": m.num_vertices(),
                "map": emit_map(&m, io.output.as_ref())?,
            })
        }
        ReduceCmd::Ap { io, eps, estimate } => {
            let g = read_map(&io.input)?;
            let inst = ap_instance(&g, *eps, cfg.constant)?;
            let mut v = json!({
                "eps": eps,
                "constant": cfg.constant,
                "layers": inst.t_d,
                "gadget_vertices": inst.d_d,
                "normalizer": inst.r.to_string(),
                "vertices": inst.map.num_vertices(),
                "map": emit_map(&inst.map, io.output.as_ref())?,
            });
            if *estimate {
                v["estimate"] =
                    serde_json::to_value(estimate_et(&g, *eps, cfg.constant, &ExactNetworkOracle)?).expect("serializes");
            }
            v
        }
    };
    Ok(render(&report))
}

fn kotzig(file: &Path) -> Out {
    let m = read_map(file)?;
    let fs = face_structure(&m)?;
    let a = count_atrails_plane(&m)?;
    Ok(render(&json!({ "atrails": a.to_string(), "faces": fs.faces.len(), "genus": fs.genus })))
}

fn sig(s: &SigCmd, cfg: &RunConfig) -> Out {
    let v = match s {
        SigCmd::Of { file } => {
            let m = read_map(file)?;
            let sg = signature_of(&m)?;
            json!({ "kind": m.kind(), "vertices": m.num_vertices(), "signature": sig_json(&sg) })
        }
        SigCmd::Glue { a, b } => {
            let (pa, pb) = (Path::new(a), Path::new(b));
            if pa.is_file() && pb.is_file() {
                let (g1, g2) = (read_map(pa)?, read_map(pb)?);
                let glued = glue_build(&g1, &g2)?;
                let built = signature_of(&glued)?;
                let formula = glue_signature(&signature_of(&g1)?, &signature_of(&g2)?)?;
                json!({
                    "signature": sig_json(&built),
                    "formula_agrees": built == formula,
                    "vertices": glued.num_vertices(),
                })
            } else {
                let g = glue_signature(&parse_signature_list(a)?, &parse_signature_list(b)?)?;
                json!({ "signature": sig_json(&g) })
            }
        }
        SigCmd::Region { a, b, c } => {
            let sg = parse_signature(a, b, c)?;
            let cl = region_classify(&sg, cfg.tolerance, cfg.precision);
            json!({
                "class": cl.class,
                "margin": cl.margin,
                "signature": sig_json(&sg),
                "tolerance": cfg.tolerance,
                "precision": cfg.precision,
            })
        }
        SigCmd::SynthMap { a, b, c, output } => {
            let target = parse_signature(a, b, c)?;
            let t = plan_map_gadget(&target)?;
            let mut v = json!({
                "target": sig_json(&target),
                "signature": sig_json(&replay_signature(&t.recipe)?),
                "vertices": t.vertices,
                "steps": t.steps,
            });
            if let Some(p) = output {
                v["map"] = emit_map(&build_recipe(&t.recipe)?, Some(p))?;
            }
            v
        }
        SigCmd::SynthGraph { a, b, c, eps, output } => {
            let target = parse_signature(a, b, c)?;
            let opts = GraphSynthOptions { size_cap: cfg.size_cap, precision: cfg.precision, ..Default::default() };
            let t = plan_graph_gadget(&target, *eps, &opts)?;
            if t.vertices > cfg.size_cap {
                return Err(Failure::Domain(format!("gadget has {} vertices, cap {}", t.vertices, cfg.size_cap)));
            }
            let got = replay_signature(&t.recipe)?;
            let mut v = json!({
                "target": sig_json(&target),
                "eps": eps,
                "signature": got.to_f64(),
                "distance": got.l1_distance(&target).to_f64(),
                "vertices": t.vertices,
                "params": t.graph,
                "steps": t.steps,
            });
            if let Some(p) = output {
                v["map"] = emit_map(&build_recipe(&t.recipe)?, Some(p))?;
            }
            v
        }
        SigCmd::Constants => serde_json::to_value(region_constants(cfg.precision)).expect("serializes"),
    };
    Ok(render(&v))
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Out {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Domain(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Domain(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

fn class_name(c: trailcount::signature::RegionClass) -> String {
    serde_json::to_value(c).expect("serializes").as_str().expect("string enum").to_string()
}

fn experiment(e: &ExperimentCmd, cfg: &RunConfig) -> Out {
    match e {
        ExperimentCmd::RegionScan { n, loops, dedup, csv } => {
            if *n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let opts =
                ScanOptions { n: *n, loops: *loops, dedup: *dedup, precision: cfg.precision, tolerance: cfg.tolerance };
            let r = region_scan(&opts)?;
            if *csv {
                let rows = r
                    .rows
                    .iter()
                    .map(|x| {
                        let s = &x.signature;
                        vec![s.alpha.clone(), s.beta.clone(), s.gamma.clone(), class_name(x.class)]
                    })
                    .collect();
                return csv_text(&["alpha", "beta", "gamma", "class"], rows);
            }
            Ok(render(&serde_json::to_value(r).expect("serializes")))
        }
        ExperimentCmd::Closure { trials, csv } => {
            if *trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            let r = closure_sample(*trials, cfg.seed, cfg.precision, cfg.tolerance)?;
            if *csv {
                let rows = r
                    .counterexamples
                    .iter()
                    .map(|[_, _, g]| vec![g.alpha.clone(), g.beta.clone(), g.gamma.clone(), "outside".into()])
                    .collect();
                return csv_text(&["alpha", "beta", "gamma", "class"], rows);
            }
            Ok(render(&serde_json::to_value(r).expect("serializes")))
        }
    }
}

fn chain(c: &ChainArgs, cfg: &RunConfig) -> Out {
    let v = match &c.calibrate {
        Some(ChainSub::Calibrate { d: Some(d), eps: Some(eps) }) => {
            let fitted = calibrate(&[*d], &[*eps])?;
            json!({ "fitted_constant": fitted, "report": mixing_report(*d, *eps, cfg.constant)? })
        }
        Some(ChainSub::Calibrate { d: None, eps: None }) => {
            let fitted = calibrate(&CALIBRATION_DEGREES, &CALIBRATION_EPS)?;
            json!({ "constant": fitted, "degrees": CALIBRATION_DEGREES, "eps": CALIBRATION_EPS })
        }
        Some(ChainSub::Calibrate { .. }) => return Err(usage("give both --d and --eps, or neither")),
        None => {
            let d = need(c.d, "d")?;
            let layers = need(c.layers, "layers")?;
            let dist = chain_distribution(d, layers)?;
            let tv = tv_to_uniform(&dist);
            let mut v = json!({
                "d": d,
                "layers": layers,
                "swaps": dist.swaps,
                "tv": tv.to_string(),
                "tv_float": tv.to_f64(),
            });
            if d <= 5 {
                let index = PermIndex::new(d)?;
                let rows: Vec<Value> = (0..index.len())
                    .map(|i| {
                        let sigma: Vec<usize> = index.perm(i).iter().map(|&x| x as usize).collect();
                        json!({
                            "type": RouteType::from_permutation(&sigma).to_string(),
                            "probability": dist.probability(i).to_string(),
                        })
                    })
                    .collect();
                v["distribution"] = json!(rows);
            }
            v
        }
    };
    Ok(render(&v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> String {
        parse_rational(s).map(|x| x.to_string()).unwrap_or_else(|_| "err".into())
    }

    #[test]
    fn rationals() {
        assert_eq!(q("0.34"), "17/50");
        assert_eq!(q("1/3"), "1/3");
        assert_eq!(q("2"), "2");
        assert_eq!(q("1e-3"), "1/1000");
        assert_eq!(q("-.5"), "-1/2");
        assert_eq!(q("2.5E1"), "25");
        assert_eq!(q("abc"), "err");
        assert_eq!(q("."), "err");
    }
}
