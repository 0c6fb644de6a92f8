//! Runs the acceptance criteria and prints one PASS/FAIL line for each.

use std::time::{Duration, Instant};

use dvdp::catalog::{
    analyze, load_catalog, verify_catalog, verify_parametrization, CatalogEntry, ParamDomain, Parametrization,
    VerificationReport, VerifyOptions,
};
use dvdp::duval::{normal_forms, resolve_dual_graph, tjurina_number};
use dvdp::exactalg::groebner::{truncated_dimension, truncated_dimension_linear_algebra};
use dvdp::exactalg::{parse, vars, FieldSpec};
use dvdp::fsplit::fedder;
use dvdp::pencil::{count_points, curve_smooth, member_curve, sample_members, trial_section};
use dvdp::wvariety::SurfaceModel;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn entry<'a>(entries: &'a [CatalogEntry], id: &str) -> &'a CatalogEntry {
    entries
        .iter()
        .find(|e| e.id == id)
        .unwrap_or_else(|| panic!("missing row {id}"))
}

fn model(p: u32, k: u32, weights: &[u32], eq: &str) -> SurfaceModel {
    SurfaceModel::from_text(&FieldSpec::new(p, k).unwrap(), weights, eq).unwrap()
}

fn rows<'a>(reports: &'a [VerificationReport], prefix: &str) -> Vec<&'a VerificationReport> {
    reports.iter().filter(|r| r.id.starts_with(prefix)).collect()
}

fn replay(reports: &[VerificationReport], prefix: &str, expected_rows: usize) -> Outcome {
    let rs = rows(reports, prefix);
    let bad: Vec<String> = rs
        .iter()
        .filter(|r| !(r.pass && r.dynkin_pass == Some(true)))
        .map(|r| format!("{} computed {}", r.id, r.analysis.dynkin))
        .collect();
    let pass = rs.len() == expected_rows && bad.is_empty();
    let examples: Vec<String> = rs
        .iter()
        .take(3)
        .map(|r| format!("{} -> {}", r.id, r.analysis.dynkin))
        .collect();
    outcome(
        pass,
        format!(
            "{}/{} rows exact ({}); failures: {:?}",
            rs.len() - bad.len(),
            expected_rows,
            examples.join(", "),
            bad
        ),
    )
}

fn c1(reports: &[VerificationReport]) -> Outcome {
    let mut o = replay(reports, "t9-", 12);
    o.detail
        .push_str("; the source table has 12 equation rows, all replayed");
    o
}

fn c2(reports: &[VerificationReport]) -> Outcome {
    replay(reports, "t11-", 7)
}

fn c3(reports: &[VerificationReport]) -> Outcome {
    let one = |id: &str| rows(reports, id).into_iter().next().unwrap();
    let seven = one("p23-7a1");
    let seven_ok = seven.pass
        && seven.analysis.points.len() == 7
        && seven
            .analysis
            .points
            .iter()
            .all(|p| p.ade == "A_1" && p.orbit_size == 1);
    let four = one("t7-4a2");
    let four_ok = four.pass && four.analysis.dynkin == "4A_2";
    let family = |id: &str| {
        let rs = rows(reports, id);
        let mut params: Vec<&Vec<String>> = rs.iter().filter_map(|r| r.params.as_ref()).collect();
        params.dedup();
        (
            rs.len() >= 5 && params.len() == rs.len() && rs.iter().all(|r| r.pass),
            rs.len(),
        )
    };
    let (d4_ok, d4_n) = family("t7-4a1d4");
    let (a1_ok, a1_n) = family("t7-8a1");
    outcome(
        seven_ok && four_ok && d4_ok && a1_ok,
        format!(
            "7A1: {} points of type A_1; 4A2: {}; 4A1+D4 at {d4_n} D1 points over F16; 8A1 at {a1_n} D2 points over F8",
            seven.analysis.points.len(),
            four.analysis.dynkin
        ),
    )
}

fn c4() -> Outcome {
    let f2 = FieldSpec::new(2, 1).unwrap();
    let f3 = FieldSpec::new(3, 1).unwrap();
    let f8 = FieldSpec::new(2, 3).unwrap();
    let f16 = FieldSpec::new(2, 4).unwrap();
    let seven = verify_parametrization(Parametrization::SevenA1, &f2, &[]).unwrap();
    let seven_ok = seven.identity_holds && seven.independence_rank == 7;
    let four = verify_parametrization(Parametrization::FourA2, &f3, &[])
        .unwrap()
        .identity_holds;
    let d4 = ParamDomain::D1.sample(&f16, 5).iter().all(|ab| {
        verify_parametrization(Parametrization::FourA1D4, &f16, ab)
            .unwrap()
            .identity_holds
    });
    // The printed 8A1 map and equation disagree by a diagonal rescaling of
    // x, y, z; check that the rescaling exists and that the map's own
    // equation is again an 8A1 surface.
    let mut literal = 0;
    let mut rescaled = 0;
    let mut implicit_8a1 = 0;
    let points = ParamDomain::D2.sample(&f8, 5);
    for abc in &points {
        let r = verify_parametrization(Parametrization::EightA1, &f8, abc).unwrap();
        literal += r.identity_holds as usize;
        rescaled += (r.identity_holds || r.rescaling.is_some()) as usize;
        if let Some(eq) = &r.implicit_equation {
            let x = SurfaceModel::from_text(&f8, &[1, 1, 2, 3], eq).unwrap();
            let (_, t) = analyze(&x, &VerifyOptions::default()).unwrap();
            implicit_8a1 += (t.to_string() == "8A_1") as usize;
        }
    }
    let n = points.len();
    outcome(
        seven_ok && four && d4 && n == 5 && rescaled == n && implicit_8a1 == n,
        format!(
            "7A1 identity {} rank {}; 4A2 identity {four}; 4A1+D4 identity at 5 points {d4}; \
             8A1 literal identity {literal}/{n} (deviation: the printed map satisfies the printed \
             equation only after rescaling x,y,z, found at {rescaled}/{n}; implicit equation 8A_1 at {implicit_8a1}/{n})",
            seven.identity_holds, seven.independence_rank
        ),
    )
}

fn c5() -> Outcome {
    let fsplit_d4 = fedder(&model(3, 1, &[1, 1, 2, 3], "w^2+z^3+x^2*y^2*z-x^4*z+x^6")).fsplit;
    let e8 = fedder(&model(3, 1, &[1, 1, 2, 3], "w^2+z^3+x*y^5")).fsplit;
    let a2 = fedder(&model(3, 1, &[1, 1, 2, 3], "w^2+z^3-x^2*y^2*(x+y)^2")).fsplit;
    outcome(
        fsplit_d4 && !e8 && !a2,
        format!("single D4 surface F-split {fsplit_d4}; E8^0 at p=3 F-split {e8}; 4A2 F-split {a2}"),
    )
}

fn c6() -> Outcome {
    let x = model(3, 2, &[1, 1, 2, 3], "w^2+z^3+x^2*y^2*z-x^4*z+x^6");
    let f = x.field().clone();
    let mut smooth = 0;
    let mut ok = true;
    for a in f.elements() {
        let c = member_curve(&x, &[a, f.from_int(-1)]).unwrap();
        let r = count_points(&c, 2).unwrap();
        let pm1 = a == f.one() || a == f.from_int(-1);
        if pm1 {
            ok &= !r.smooth;
        } else if r.smooth {
            smooth += 1;
            ok &= r.trace % 3 == 0 && r.ordinary == Some(false);
        }
    }
    outcome(
        ok,
        format!("members y = a x over F9: a = +-1 singular, {smooth} other members smooth and supersingular"),
    )
}

fn c7(entries: &[CatalogEntry], reports: &[VerificationReport]) -> Outcome {
    let mut ok = true;
    let mut split = Vec::new();
    let mut all_singular = Vec::new();
    let candidates = reports.iter().filter(|r| {
        let e = entry(entries, &r.id);
        e.prime() == Some(2) && e.domain.is_none()
    });
    for r in candidates {
        let x = entry(entries, &r.id)
            .model(&FieldSpec::new(2, 1).unwrap(), &[])
            .unwrap();
        let s = sample_members(&x, 4, 50, 0).unwrap();
        if r.analysis.fedder.fsplit {
            ok &= s.smooth_count >= 1 && s.ordinary_count >= 1;
            split.push(format!("{} {}/{}", r.id, s.ordinary_count, s.smooth_count));
        } else if s.smooth_count == 0 {
            all_singular.push(r.id.clone());
        }
    }
    ok &= all_singular.iter().any(|id| id == "t9-e8-0");
    outcome(
        ok && !split.is_empty(),
        format!(
            "F-split p=2 rows (ordinary/smooth of 50 over F16, seed 0): {}; all 50 singular: {}",
            split.join(", "),
            all_singular.join(", ")
        ),
    )
}

fn c8(reports: &[VerificationReport]) -> Outcome {
    let checked: Vec<&VerificationReport> = reports.iter().filter(|r| r.rank_degree_pass.is_some()).collect();
    let bad: Vec<&str> = checked
        .iter()
        .filter(|r| r.rank_degree_pass != Some(true))
        .map(|r| r.id.as_str())
        .collect();
    let exempt: Vec<&str> = reports
        .iter()
        .filter(|r| r.rank_degree_pass.is_none())
        .map(|r| r.id.as_str())
        .collect();
    outcome(
        bad.is_empty() && !checked.is_empty(),
        format!(
            "rank + degree = 9 on {} replays with an expected type; not applicable: {}",
            checked.len(),
            exempt.join(", ")
        ),
    )
}

fn c9() -> Outcome {
    // (a) Gröbner truncations against plain linear algebra
    let forms = normal_forms().unwrap();
    let mut a_ok = true;
    for nf in &forms {
        let mut gens = vec![nf.equation.clone()];
        gens.extend(nf.equation.gradient());
        let tau = tjurina_number(&nf.equation).unwrap();
        let mut prev = None;
        let mut settled = false;
        for n in 1..=40 {
            let la = truncated_dimension_linear_algebra(&gens, n);
            a_ok &= la == truncated_dimension(&gens, n);
            if prev == Some(la) {
                settled = la == tau;
                break;
            }
            prev = Some(la);
        }
        a_ok &= settled;
    }
    // (b) Weil relation on smooth members
    let surfaces = [
        model(2, 2, &[1, 1, 2, 3], "w^2+z^3+x*y^5+y*z*w"),
        model(2, 2, &[1, 1, 1, 2], "w^2+y*z^3+x*y^3+y*z*w"),
        model(2, 2, &[1, 1, 1, 1], "w*z^2+x^3+y^2*z+x*y*z"),
        model(3, 1, &[1, 1, 2, 3], "w^2+z^3+x*y^5+y^2*z^2"),
        model(3, 1, &[1, 1, 1, 2], "w^2+y*z^3+x*y^3+y^2*z^2"),
    ];
    let mut members = 0;
    let mut b_ok = true;
    'outer: for seed in 0u64.. {
        for x in &surfaces {
            let len = x.weights().iter().filter(|&&w| w == 1).count();
            let c = member_curve(x, &trial_section(x.field(), len, seed, 0)).unwrap();
            if !curve_smooth(&c).unwrap() {
                continue;
            }
            let k = x.field().k();
            let (r1, r2) = (count_points(&c, k).unwrap(), count_points(&c, 2 * k).unwrap());
            b_ok &= r2.trace == r1.trace * r1.trace - 2 * r1.q as i64;
            members += 1;
            if members == 20 {
                break 'outer;
            }
        }
    }
    // (c) A_n chains
    let mut c_ok = true;
    for p in [2, 3] {
        let f = FieldSpec::new(p, 1).unwrap();
        for n in 1..=5u32 {
            let g = parse(&format!("x*y+z^{}", n + 1), &vars(&["x", "y", "z"]), &f).unwrap();
            let graph = resolve_dual_graph(&g, 8).unwrap();
            let mut deg = vec![0; graph.nodes];
            for &(i, j) in &graph.edges {
                deg[i] += 1;
                deg[j] += 1;
            }
            let ends = deg.iter().filter(|&&d| d <= 1).count();
            c_ok &= graph.nodes == n as usize
                && graph.edges.len() + 1 == graph.nodes
                && deg.iter().all(|&d| d <= 2)
                && (n == 1 || ends == 2);
        }
    }
    outcome(
        a_ok && b_ok && c_ok,
        format!(
            "(a) {} normal forms: {a_ok}; (b) Weil relation on {members} smooth members: {b_ok}; (c) A_n chains n<=5, p=2,3: {c_ok}",
            forms.len()
        ),
    )
}

fn c10() -> Outcome {
    let run = || dvdp::cli::run(["dvdp", "catalog", "verify", "--format", "json"]);
    let (a, b) = (run(), run());
    outcome(
        a.code == 0 && a == b,
        format!(
            "two runs, {} bytes each, identical: {}",
            a.stdout.len(),
            a.stdout == b.stdout
        ),
    )
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let o = f();
    (o, t.elapsed())
}

fn main() {
    let entries = load_catalog().unwrap();
    let (reports, replay_time) = {
        let t = Instant::now();
        let r = verify_catalog(&entries, None, 5, &VerifyOptions::default()).unwrap();
        (r, t.elapsed())
    };
    let results: Vec<(&str, Outcome, Duration)> = vec![
        ("1 characteristic-2 coindex rows", c1(&reports), replay_time),
        ("2 characteristic-3 coindex rows", c2(&reports), replay_time),
        ("3 7A1, 4A2 and the two families", c3(&reports), replay_time),
        {
            let (o, t) = timed(c4);
            ("4 parametrizations", o, t)
        },
        {
            let (o, t) = timed(c5);
            ("5 Fedder anchors", o, t)
        },
        {
            let (o, t) = timed(c6);
            ("6 supersingular members over F9", o, t)
        },
        {
            let (o, t) = timed(|| c7(&entries, &reports));
            ("7 member sampling", o, t)
        },
        ("8 rank-degree law", c8(&reports), replay_time),
        {
            let (o, t) = timed(c9);
            ("9 oracles", o, t)
        },
        {
            let (o, t) = timed(c10);
            ("10 determinism", o, t)
        },
    ];
    let mut failed = 0;
    for (name, o, t) in &results {
        println!(
            "{} criterion {name} [{:.1}s]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            t.as_secs_f64(),
            o.detail
        );
        failed += (!o.pass) as usize;
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
