use proptest::prelude::*;
use std::collections::BTreeMap;
use std::process::{Command, Output};
use wittkit::cli::*;
use wittkit::error::Error;
use wittkit::finring::find_isomorphism;
use wittkit::fpalg::{FpAlgebra, IntPoly};

fn wittkit(args: &[&str], guard: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wittkit"));
    cmd.args(args).env_remove("WITTKIT_GUARD");
    if let Some(g) = guard {
        cmd.env("WITTKIT_GUARD", g);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("report is JSON")
}

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn algebra(text: &str) -> FpAlgebra {
    match parse_presentation(text).unwrap().build_default().unwrap() {
        Built::Algebra(a) => a,
        other => panic!("not an algebra: {other:?}"),
    }
}

// Oracle for one-variable quotients: dim F_p[t]/(f) = deg(f mod p), reduced iff gcd(f, f') = 1.

fn inv(a: i64, p: i64) -> i64 {
    (1..p).find(|x| a * x % p == 1).unwrap()
}

fn trim(mut f: Vec<i64>) -> Vec<i64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_rem(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let mut a = trim(a.to_vec());
    let lead = inv(*b.last().unwrap(), p);
    while a.len() >= b.len() {
        let c = a.last().unwrap() * lead % p;
        let shift = a.len() - b.len();
        for (i, &bi) in b.iter().enumerate() {
            a[shift + i] = (a[shift + i] - c * bi).rem_euclid(p);
        }
        a = trim(a);
    }
    a
}

fn poly_gcd(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn one_variable_oracle(coeffs: &[i64], p: i64) -> (usize, bool) {
    let f = trim(coeffs.iter().map(|c| c.rem_euclid(p)).collect());
    let df = trim(f.iter().enumerate().skip(1).map(|(i, &c)| (c * i as i64).rem_euclid(p)).collect());
    let reduced = df.is_empty() && f.len() == 1 || !df.is_empty() && poly_gcd(&f, &df, p).len() == 1;
    (f.len() - 1, reduced)
}

#[test]
fn parser_examples() {
    let a = algebra("algebra F2[t]/(t^2+t)");
    assert_eq!(a.dim(), 2);
    assert_eq!(a.structure_constants().len(), 2);
    let b = algebra("algebra F3[t]/(t^3-t)");
    assert_eq!((b.dim(), b.is_reduced()), (3, true));
    assert_eq!(one_variable_oracle(&[0, -1, 0, 1], 3), (3, true));
    let e = parse_presentation("algebra F4[x]/(x^2+x+1)").unwrap_err();
    assert!(matches!(&e, Error::Parse { line: 1, col: 10, msg } if msg.contains("4 is not prime")), "{e}");
}

#[test]
fn one_variable_quotients_match_the_gcd_oracle() {
    let cases: [(u64, &[i64]); 7] = [
        (2, &[0, 0, 1]),
        (2, &[1, 1, 1]),
        (2, &[1, 0, 0, 1]),
        (3, &[1, 0, 1]),
        (3, &[0, 0, 1, 1]),
        (5, &[4, 0, 0, 0, 1]),
        (5, &[3, 0, 1, 0, 1]),
    ];
    for (p, f) in cases {
        let terms: BTreeMap<Vec<u32>, i64> = f.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (vec![i as u32], c)).collect();
        let text = format!("F{p}[t]/({})", format_poly(&["t".to_string()], &IntPoly { terms }));
        let a = algebra(&text);
        assert_eq!((a.dim(), a.is_reduced()), one_variable_oracle(f, p as i64), "{text}");
    }
}

#[test]
fn several_variables() {
    // F2[x, y]/(x² + x, y² + y) is F2⁴
    let a = algebra("F2[x, y]/(x^2 + x; y^2 + y)");
    let f2 = FpAlgebra::prime_field(2).unwrap();
    let f4 = f2.product(&f2).unwrap().product(&f2).unwrap().product(&f2).unwrap();
    assert!(find_isomorphism(&a.to_finring().unwrap(), &f4.to_finring().unwrap()).is_some());
    // a degree bound is the same as adding the monomials above it
    let b = algebra("F3[x, y] deg <= 2");
    let c = algebra("F3[x, y]/(x^3; x^2 y; x y^2; y^3)");
    assert_eq!(b.dim(), 6);
    assert!(find_isomorphism(&b.to_finring().unwrap(), &c.to_finring().unwrap()).is_some());
    // implicit products and parentheses
    assert_eq!(parse_presentation("F2[x,y]/((x+y)^2)").unwrap(), parse_presentation("F2[x,y]/(x^2 + 2x y + y^2)").unwrap());
}

#[test]
fn module_and_extension_kinds() {
    let p = parse_presentation("module Z/4[a, b]/(2*a; 2b)").unwrap();
    let Built::Module(m) = p.build_default().unwrap() else { panic!() };
    assert_eq!(m.invariant_factors(), vec![2, 2]);
    let p = parse_presentation("extension Z/4[t]/(t^2 + t)").unwrap();
    let Built::Extension(b) = p.build_default().unwrap() else { panic!() };
    assert_eq!((b.dim(), b.modulus().q()), (2, 4));
    assert_eq!(p.algebra().unwrap(), algebra("F2[t]/(t^2 + t)"));
    let e = parse_presentation("module Z/4[a]/(a^2)").unwrap_err();
    assert!(matches!(e, Error::Parse { col: 16, .. }), "{e}");
    assert!(parse_presentation("extension Z/4[t]/(2t^2 + 1)").is_err());
    assert!(parse_presentation("extension Z/4[s, t]/(s; t)").is_err());
    assert!(parse_presentation("module Z/4[a] deg <= 2").is_err());
}

#[test]
fn errors_carry_positions() {
    let cases = [
        ("F2[t]/(t^2 + s)", 1, 14, "unknown generator"),
        ("algebra F2[t]\n  /(t^2 +)", 2, 10, "expected a term"),
        ("Z/6[a]", 1, 3, "not a prime power"),
        ("algebra Z/4[t]/(t^2)", 1, 9, "prime field"),
        ("F2[t, t]", 1, 7, "repeated"),
        ("F2[t]/(t^99)", 1, 10, "exceeds"),
        ("F2[t]/(t^2) $", 1, 13, "unexpected character"),
        ("ring F2", 1, 1, "coefficient ring"),
        ("F2[t]/(t^2) extra", 1, 13, "unexpected"),
    ];
    for (text, line, col, needle) in cases {
        match parse_presentation(text) {
            Err(Error::Parse { line: l, col: c, msg }) => {
                assert_eq!((l, c), (line, col), "{text}: {msg}");
                assert!(msg.contains(needle), "{text}: {msg}");
            }
            other => panic!("{text}: {other:?}"),
        }
    }
}

#[test]
fn dimension_cap() {
    let p = parse_presentation("F2[x, y, z]/(x^5; y^5; z^5)").unwrap();
    assert!(p.build(64).is_err());
    assert_eq!(match p.build(125).unwrap() { Built::Algebra(a) => a.dim(), _ => 0 }, 125);
    assert!(parse_presentation("F2[x]").unwrap().build_default().is_err());
}

fn arb_presentation() -> impl Strategy<Value = Presentation> {
    let kind = prop_oneof![Just(Kind::Algebra), Just(Kind::Module)];
    (kind, prop_oneof![Just(2u64), Just(3), Just(5)], 1u32..=3, 1usize..=3, prop::collection::vec(prop::collection::btree_map(prop::collection::vec(0u32..4, 3), -20i64..20, 0..4), 0..3), prop::option::of(1u32..5))
        .prop_map(|(kind, p, n, k, rels, bound)| {
            let generators: Vec<String> = ["x", "y", "z1"][..k].iter().map(|s| s.to_string()).collect();
            let relators = rels
                .into_iter()
                .map(|t| {
                    let mut terms = BTreeMap::new();
                    for (m, c) in t {
                        let mut m: Vec<u32> = m[..k].to_vec();
                        if kind == Kind::Module {
                            // a single generator to the first power
                            let i = m.iter().position(|&e| e > 0).unwrap_or(0);
                            m = (0..k).map(|j| u32::from(j == i)).collect();
                        }
                        if c != 0 {
                            *terms.entry(m).or_insert(0) += c;
                        }
                    }
                    terms.retain(|_, c| *c != 0);
                    IntPoly { terms }
                })
                .filter(|f| !f.terms.is_empty())
                .collect();
            let n = if kind == Kind::Algebra { 1 } else { n };
            Presentation { kind, p, n, generators, relators, degree_bound: if kind == Kind::Algebra { bound } else { None } }
        })
}

proptest! {
    #[test]
    fn format_then_parse_is_identity(pres in arb_presentation()) {
        let text = pres.format();
        let back = parse_presentation(&text).unwrap();
        prop_assert_eq!(&back, &pres);
        prop_assert_eq!(back.format(), text);
    }

    #[test]
    fn reformatting_is_stable(a in -9i64..9, b in -9i64..9, e in 1u32..4, spaces in 0usize..3) {
        let sp = " ".repeat(spaces);
        let text = format!("algebra{sp} F3 [x,{sp}y]/(({a})x^{e} {sp}* y - ({b}) ;{sp} x y + {a}*{b} ) # comment");
        let p = parse_presentation(&text).unwrap();
        prop_assert_eq!(parse_presentation(&p.format()).unwrap(), p);
    }
}

#[test]
fn report_round_trips_through_json() {
    let params = Params { p: Some(2), d: Some(2), r: Some(1), seed: 0, guard: 1 << 20, ..Default::default() };
    let report = run_suite("isogamma", &params).unwrap();
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert!(schema().is_valid(&v));
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(v["sections"][0]["data"]["order"], 4);
    assert!(report.to_markdown().contains("| pairing.perfect | pass |"));
    assert!(matches!(run_suite("grassmannian", &params), Err(Error::Precondition(_))));
}

#[test]
fn cli_isogamma_example() {
    let o = wittkit(&["run", "isogamma", "--p", "2", "--d", "2", "--r", "2", "--format", "json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(schema().is_valid(&v));
    assert_eq!(v["passed"], true);
    assert_eq!(v["sections"][0]["data"]["order"], 32);
    assert_eq!(v["sections"][0]["data"]["invariant_factors"], serde_json::json!([4, 4, 2]));
}

#[test]
fn cli_witt_axioms_example() {
    let o = wittkit(&["run", "witt-axioms", "--p", "3", "--n", "2", "--algebra", "F3[t]/(t^2+t)"], None);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict: **PASS**"), "{out}");
    assert!(out.contains("witt.p-teichmuller | pass"));
}

#[test]
fn cli_rejects_non_reduced_input() {
    let o = wittkit(&["run", "deformation", "--algebra", "F2[t]/(t^2)"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rejected: not reduced"));
    assert!(o.stdout.is_empty());
}

#[test]
fn cli_argument_errors() {
    let o = wittkit(&["run", "witt-axioms", "--p", "2", "--algebra", "F3[t]/(t^2+t)"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = wittkit(&["run", "witt-axioms", "--algebra", "F2[t]/(t^2+"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column"));
    let o = wittkit(&["run", "grassmannian"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cli_guard_from_environment_and_flag() {
    // W3(F4) has 64 elements: 64³ triples exceed a guard of 10000, so the axioms are sampled
    let args = ["run", "witt-axioms", "--n", "3", "--algebra", "F2[t]/(t^2+t+1)", "--format", "json"];
    let v = json(&wittkit(&args, Some("10000")));
    assert_eq!(v["params"]["guard"], 10000);
    assert_eq!(v["sections"][0]["checks"][0]["mode"], "sampled");
    assert_eq!(v["notices"].as_array().unwrap().len(), 1);
    assert!(v["notices"][0].as_str().unwrap().starts_with("sampled: "));
    // the flag wins over the environment
    let mut with_flag = args.to_vec();
    with_flag.extend(["--guard", "1000000"]);
    let v = json(&wittkit(&with_flag, Some("10000")));
    assert_eq!(v["sections"][0]["checks"][0]["mode"], "exhaustive");
    assert!(v["notices"].as_array().unwrap().is_empty());
    // a guard below what a suite must enumerate is an error, not a silent truncation
    let o = wittkit(&["run", "isogamma", "--p", "3", "--d", "2", "--r", "2"], Some("100"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("guard"));
}

#[test]
fn cli_reports_are_deterministic() {
    let args = ["run", "witt-axioms", "--n", "3", "--algebra", "F2[t]/(t^2+t+1)", "--seed", "7", "--format", "json"];
    let a = wittkit(&args, Some("10000"));
    let b = wittkit(&args, Some("10000"));
    assert_eq!(a.stdout, b.stdout);
    let c = wittkit(&["run", "tautological", "--d", "2"], None);
    let d = wittkit(&["run", "tautological", "--d", "2"], None);
    assert_eq!(c.stdout, d.stdout);
    let t = json(&wittkit(&["run", "tautological", "--d", "2", "--format", "json", "--timings"], None));
    assert!(t["timings_ms"]["tautological"].is_u64());
    assert!(schema().is_valid(&t));
}

#[test]
fn cli_parse_command() {
    let dir = std::env::temp_dir().join(format!("wittkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.txt");
    std::fs::write(&good, "# cubic\nalgebra F3[t]/(t^3-t)\n").unwrap();
    let o = wittkit(&["parse", good.to_str().unwrap(), "--format", "json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!((v["dim"].as_u64(), v["reduced"].as_bool()), (Some(3), Some(true)));
    assert_eq!(v["presentation"], "algebra F3[t]/(t^3 - t)");
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "algebra F4[x]/(x^2)\n").unwrap();
    let o = wittkit(&["parse", bad.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4 is not prime"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn all_report_states_the_exclusion() {
    let params = Params { seed: 0, guard: 1 << 20, ..Default::default() };
    let report = run_suite("all", &params).unwrap();
    assert!(report.passed);
    assert_eq!(report.exclusions.len(), 1);
    assert!(report.to_markdown().contains("Grassmannians"));
    let suites: std::collections::BTreeSet<&str> = report.sections.iter().map(|s| s.id.split('/').next().unwrap()).collect();
    assert_eq!(suites.len(), 5);
    assert!(schema().is_valid(&serde_json::from_str(&report.to_json()).unwrap()));
}
