//! One line per acceptance criterion; the test fails if any line fails.

mod common;

use std::path::PathBuf;

use mcgauge::ainf::random::{random_isotopy, random_series, RandomShape};
use mcgauge::ainf::{
    bracket, compose_infty, differential, invert_infty, isotopy_action, marked_composite, right_action, star,
    ConvolutionLie, ConvolutionMode, OpSeries,
};
use mcgauge::cli::certificate::{Certificate, CertificateFile};
use mcgauge::cli::format::{build, read_family, BuildOptions};
use mcgauge::cli::main_with_args;
use mcgauge::lie::{bch, gauge_action};
use mcgauge::linalg::Field;
use mcgauge::samples::heisenberg;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const A_MAX: usize = 6;
const CASES: u64 = 100;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("mcgauge-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Result<Value, String> {
    let (code, out, err) = main_with_args(std::iter::once("mcgauge").chain(args.iter().copied()));
    if code != 0 {
        return Err(format!("{args:?} exited with {code}: {err}{out}"));
    }
    let start = out.find("\n{").ok_or("no json block")? + 1;
    serde_json::from_str(&out[start..]).map_err(|e| e.to_string())
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond { Ok(()) } else { Err(what.into()) }
}

fn certificates(path: &str) -> Result<Vec<Certificate>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let file: CertificateFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    Ok(file.certificates)
}

fn stasheff() -> Outcome {
    let input = cli(&["check-mc", &fixture("heisenberg.json")])?;
    ensure(input["holds"] == true, "the strict Heisenberg algebra fails check-mc")?;
    let out = scratch("heisenberg-transferred.json");
    cli(&["transfer", &fixture("heisenberg.json"), "--out", &out])?;
    let t = cli(&["check-mc", &out])?;
    ensure(t["holds"] == true, "the transferred structure fails check-mc")?;
    Ok("strict and transferred structures have zero residual through arity 6".into())
}

fn non_formality() -> Outcome {
    let cert = scratch("heisenberg.cert.json");
    let r = cli(&["formality", &fixture("heisenberg.json"), "--certificate", &cert])?;
    ensure(r["verdict"] == "not formal", format!("verdict {}", r["verdict"]))?;
    for level in r["levels"].as_array().unwrap() {
        ensure(level["degree"] == "2", format!("{} level degree {}", level["level"], level["degree"]))?;
    }
    let ((ac, bc), no_indeterminacy) = common::exterior::massey_aab();
    ensure(no_indeterminacy && ac.abs() == 1 && bc == 0, "oracle triple product is not ±[ac]")?;
    let obstruction = certificates(&cert)?
        .into_iter()
        .find(|c| c.kind() == "obstruction")
        .ok_or("no obstruction certificate")?;
    let Certificate::Obstruction { algebra, arity_max, representative, index, .. } = &obstruction else { unreachable!() };
    ensure(*index == 2, "obstruction index differs from 2")?;
    let alg = build(algebra, BuildOptions { arity_max: *arity_max, ..Default::default() }).map_err(|e| e.to_string())?;
    let rep = mcgauge::ainf::to_unshifted(&read_family(&alg.space, -1, *arity_max, representative, "rep").map_err(|e| e.to_string())?);
    let idx = |n: &str| alg.space.index_of(n).unwrap();
    let value = rep.eval(&[idx("a") as u32, idx("a") as u32, idx("b") as u32]);
    let field = alg.space.field();
    let at = |i: usize| value.get(i).cloned().unwrap_or_else(|| field.zero());
    ensure(at(idx("bc")).is_zero(), "representative has a [bc] component on (a, a, b)")?;
    ensure(at(idx("ac")) == field.from_i64(ac) || at(idx("ac")) == field.from_i64(-ac), "representative on (a, a, b) is not ±[ac]")?;
    let v = obstruction.verify().map_err(|e| e.to_string())?;
    ensure(v.holds(), "the dual functional does not separate the representative")?;
    Ok("degree 2, not formal; representative on (a, a, b) is ±[ac] as the oracle's ⟨a, a, b⟩".into())
}

fn sphere_formal() -> Outcome {
    let cert = scratch("sphere.cert.json");
    let r = cli(&["formality", &fixture("sphere.json"), "--certificate", &cert])?;
    ensure(r["verdict"] == "formal (certified)", format!("verdict {}", r["verdict"]))?;
    let gauge = &r["levels"][0];
    ensure(gauge["level"] == "gauge", "no gauge level report")?;
    let eta = gauge["bound"].as_u64().ok_or("no bound found")?;
    ensure(eta <= 3, format!("bound {eta} exceeds 3"))?;
    let c = certificates(&cert)?.into_iter().find(|c| c.kind() == "gauge").ok_or("no gauge certificate")?;
    ensure(c.verify().map_err(|e| e.to_string())?.holds(), "ω·φ differs from the binary part")?;
    Ok(format!("formal, certified with η = {eta}; explicit gauge verified"))
}

fn group_laws() -> Outcome {
    let s = heisenberg(Field::Rational, A_MAX);
    let g = ConvolutionLie::new(&s.space, A_MAX, ConvolutionMode::Full);
    let phi = g.element(&s.structure).map_err(|e| e.to_string())?;
    let shape = RandomShape { degree: 0, arities: 2..=3, entries: 2, normalized: false };
    for seed in 0..CASES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda = g.element(&random_series(&s.space, &s.space, A_MAX, &shape, &mut rng)).unwrap();
        let nu = g.element(&random_series(&s.space, &s.space, A_MAX, &shape, &mut rng)).unwrap();
        let lhs = gauge_action(&g, &bch(&g, &lambda, &nu).unwrap(), &phi).unwrap();
        let rhs = gauge_action(&g, &lambda, &gauge_action(&g, &nu, &phi).unwrap()).unwrap();
        ensure(lhs == rhs, format!("BCH law fails for seed {seed}"))?;
        let f = random_isotopy(&s.space, 3, 2, &mut rng).with_max_arity(A_MAX);
        let moved = isotopy_action(&f, &s.structure).unwrap();
        let back = isotopy_action(&invert_infty(&f).unwrap(), &moved).unwrap();
        ensure(back == s.structure, format!("inverse isotopy law fails for seed {seed}"))?;
    }
    Ok(format!("{CASES} random triples: BCH(λ,ν)·φ = λ·(ν·φ) and f⁻¹·(f·φ) = φ"))
}

fn lemma_suite() -> Outcome {
    let s = heisenberg(Field::Rational, A_MAX);
    let a = &s.space;
    let c = |x: &OpSeries, y: &OpSeries| compose_infty(x, y).unwrap();
    let m = |x: &OpSeries, y: &OpSeries, l: &OpSeries| marked_composite(x, y, l).unwrap();
    let ra = |x: &OpSeries, y: &OpSeries| right_action(x, y).unwrap();
    let inv = |x: &OpSeries| invert_infty(x).unwrap();
    let phi = &s.structure;
    for seed in 0..CASES {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let mut iso = || random_isotopy(a, 3, 2, &mut rng).with_max_arity(A_MAX);
        let (f, g, k) = (iso(), iso(), iso());
        let mut map = || {
            let degree = rng.gen_range(-2..=1);
            random_series(a, a, A_MAX, &RandomShape { degree, arities: 1..=3, entries: 3, normalized: false }, &mut rng)
        };
        let (l, l2, y) = (map(), map(), map());
        let (finv, ginv) = (inv(&f), inv(&g));
        let checks = [
            c(&y, &c(&g, &f)) == c(&c(&y, &g), &f),
            m(&c(&y, &g), &f, &l) == m(&y, &c(&g, &f), &m(&g, &f, &l)),
            c(&m(&g, &f, &l), &k) == m(&g, &c(&f, &k), &c(&l, &k)),
            c(phi, &c(&f, &k)) == c(&c(phi, &f), &k),
            ra(&c(&g, &f), phi) == m(&g, &f, &ra(&f, phi)),
            c(&c(&l, &finv), &f) == l,
            c(&ra(&g, &c(&l, &finv)), &ginv) == c(&m(&g, &f, &l), &c(&finv, &ginv)),
            m(&l, &finv, &l2) == star(&c(&l, &finv), &m(&f, &finv, &l2)).unwrap(),
            c(&ra(&f, phi), &finv) == m(&f, &finv, &c(phi, &finv)),
        ];
        if let Some(i) = checks.iter().position(|ok| !ok) {
            return Err(format!("identity {} fails for seed {seed}", i + 1));
        }
        let lhs = differential(&c(&g, &f)).unwrap();
        let rhs = c(&differential(&g).unwrap(), &f).add(&m(&g, &f, &differential(&f).unwrap())).unwrap();
        ensure(lhs == rhs, format!("differential of a composite fails for seed {seed}"))?;
    }
    Ok(format!("identities 1 to 9 on {CASES} random instances each"))
}

fn kaledin() -> Outcome {
    let mut summary = Vec::new();
    for (name, formal) in [("heisenberg.json", false), ("f3.json", true)] {
        for n in 2..=5usize {
            let r = cli(&["kaledin", &fixture(name), "--n", &(n - 1).to_string()])?;
            let o = &r["orders"][0];
            ensure(o["vanishes"] == o["classes_vanish"], format!("{name}: n = {n} disagrees"))?;
            ensure(o["vanishes"] == formal, format!("{name}: n = {n} unexpected verdict"))?;
        }
        summary.push(format!("{} {}", name.trim_end_matches(".json"), if formal { "vanishing" } else { "nonvanishing" }));
    }
    Ok(format!("n = 2..5 consistent ({})", summary.join(", ")))
}

fn char_p() -> Outcome {
    for p in [5, 7] {
        let tag = format!("Fp:{p}");
        let r = cli(&["formality", &fixture("heisenberg.json"), "--field", &tag])?;
        ensure(r["verdict"] == "not formal", format!("F{p} verdict {}", r["verdict"]))?;
        let iso = &r["levels"][0];
        ensure(iso["degree"] == "2", format!("F{p} degree {}", iso["degree"]))?;
        ensure(iso["cap"] == A_MAX.min(p + 1), format!("F{p} cap {}", iso["cap"]))?;
    }
    let r = cli(&["obstruction", &fixture("f3.json"), "--level", "isotopy", "--field", "Fp:5", "--arity-max", "7"])?;
    ensure(r["report"]["cap"] == 6, format!("F5 cap at arity 7 is {}", r["report"]["cap"]))?;
    Ok("F5 and F7 match Q (degree 2, not formal); F5 cap 6".into())
}

fn closed_forms() -> Outcome {
    let cert = scratch("f3.cert.json");
    let r = cli(&["highconn-pipeline", &fixture("f3.json"), "--certificate", &cert])?;
    ensure(r["lambda"] == "closed form", format!("λ by {}", r["lambda"]))?;
    ensure(r["final_arities"] == serde_json::json!([2]), format!("final arities {}", r["final_arities"]))?;
    let Some(Certificate::MinimalModel { algebra, arity_max, lambda, .. }) = certificates(&cert)?.into_iter().next() else {
        return Err("no minimal model certificate".into());
    };
    let alg = build(&algebra, BuildOptions { arity_max, ..Default::default() }).map_err(|e| e.to_string())?;
    let lam = read_family(&alg.space, 0, arity_max, &lambda, "lambda").map_err(|e| e.to_string())?;
    ensure(!lam.is_zero(), "λ is zero")?;
    let residual = bracket(&alg.structure.part(2), &lam).unwrap().sub(&alg.structure.part(3)).unwrap();
    ensure(residual.is_zero(), "[φ₂, λ] - m₃ is nonzero")?;
    Ok("λ by the closed form with zero residual; final model is binary".into())
}

fn reverify() -> Outcome {
    let mut n = 0;
    for name in ["heisenberg.cert.json", "sphere.cert.json", "f3.cert.json"] {
        let path = scratch(name);
        let r = cli(&["verify", &path])?;
        ensure(r["holds"] == true, format!("{name} rejected"))?;
        n += r["certificates"].as_array().map_or(0, Vec::len);
    }
    Ok(format!("{n} certificates verified standalone"))
}

fn determinism() -> Outcome {
    let cert = scratch("det.cert.json");
    let runs: Vec<Vec<String>> = vec![
        vec!["check-mc".into(), fixture("heisenberg.json")],
        vec!["transfer".into(), fixture("heisenberg.json")],
        vec!["obstruction".into(), fixture("heisenberg.json"), "--level".into(), "isotopy".into()],
        vec!["degree".into(), fixture("heisenberg.json"), "--seed".into(), "5".into()],
        vec!["kaledin".into(), fixture("f3.json")],
        vec!["formality".into(), fixture("heisenberg.json"), "--certificate".into(), cert.clone()],
        vec!["highconn-pipeline".into(), fixture("f3.json"), "--certificate".into(), cert.clone()],
        vec!["verify".into(), cert.clone()],
    ];
    for args in &runs {
        let argv = std::iter::once("mcgauge").chain(args.iter().map(String::as_str));
        let first = main_with_args(argv.clone());
        let cert_first = std::fs::read(&cert).ok();
        let second = main_with_args(argv);
        ensure(first == second, format!("{} differs between runs", args[0]))?;
        ensure(cert_first == std::fs::read(&cert).ok(), format!("{} certificate differs between runs", args[0]))?;
    }
    Ok(format!("{} commands byte-identical across two runs", runs.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("Stasheff identities", stasheff),
        ("non-formality", non_formality),
        ("formality certificate", sphere_formal),
        ("group-action laws", group_laws),
        ("composite identities", lemma_suite),
        ("Kaledin consistency", kaledin),
        ("positive characteristic", char_p),
        ("closed-form gauges", closed_forms),
        ("certificate re-verification", reverify),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
