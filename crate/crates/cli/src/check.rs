//! Fast versions of the library's invariant suites.

use clusterlin::asym::{a_second_derivative, c_constant};
use clusterlin::exactcount::{exact_count, Variant};
use clusterlin::mcmc::uniformity_tv;
use clusterlin::perm::{all_permutations, occurrence_histograms, PatternPerm};
use clusterlin::poset::{build, cluster_poset, count_linear_extensions_bruteforce, sandwich_check, ClusterParams};
use clusterlin::varfun::{lemma_bound_check, Profile};
use clusterlin::FinitePoset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{Cell, Report};
use crate::{Failure, Output};

type Verdict = Result<String, String>;
type Suite = (&'static str, Box<dyn Fn() -> Verdict>);

fn triples(m_max: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (2..=m_max).flat_map(|m| (1..m).flat_map(move |a| (a + 1..=m).map(move |b| (m, a, b))))
}

fn fail(e: clusterlin::Error) -> String {
    e.to_string()
}

fn exact_vs_brute() -> Verdict {
    let mut cases = 0;
    for (m, a, b) in triples(5) {
        for n in 1.. {
            let p = ClusterParams::new(m, a, b, n).map_err(fail)?;
            if p.q_size() > 14 {
                break;
            }
            for v in [Variant::P, Variant::Q] {
                let x = exact_count(&p, v).map_err(fail)?;
                let y = count_linear_extensions_bruteforce(&build(&p, v)).map_err(fail)?;
                if x != y {
                    return Err(format!("{v} {p}: {x} vs {y}"));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn sandwich() -> Verdict {
    let mut cases = 0;
    for (m, a, b) in triples(5) {
        for n in 1..=4 {
            let p = ClusterParams::new(m, a, b, n).map_err(fail)?;
            if !sandwich_check(&p).map_err(fail)? {
                return Err(format!("fails at {p}"));
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} cases"))
}

fn mirror() -> Verdict {
    for (m, a, b) in triples(6) {
        for n in 1..=6 {
            let p = ClusterParams::new(m, a, b, n).map_err(fail)?;
            if exact_count(&p, Variant::P).map_err(fail)? != exact_count(&p.mirror(), Variant::P).map_err(fail)? {
                return Err(format!("counts differ at {p}"));
            }
        }
        let (x, y) = (c_constant(m, a, b).map_err(fail)?.c, c_constant(m, m + 1 - b, m + 1 - a).map_err(fail)?.c);
        if (x - y).abs() > 1e-10 {
            return Err(format!("constants differ at ({m},{a},{b})"));
        }
    }
    Ok("counts and constants agree".into())
}

fn concavity() -> Verdict {
    for d in 2..=6 {
        for k in 0..=200 {
            let t = k as f64 / 10.0;
            if a_second_derivative(t, d).map_err(fail)? >= 0.0 {
                return Err(format!("A''({t},{d}) >= 0"));
            }
        }
    }
    Ok("t in [0; 20] and d in 2..=6".into())
}

fn profile(seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (m, a, b) in triples(6) {
        let p = Profile::new(m, a, b).map_err(fail)?;
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            let back = p.g(p.f(t).map_err(fail)?).map_err(fail)?;
            if (back - t).abs() > 1e-10 {
                return Err(format!("({m},{a},{b}) g(f({t})) = {back}"));
            }
            if (1..100).contains(&k) && p.ode_residual(t).map_err(fail)? > 1e-8 {
                return Err(format!("({m},{a},{b}) residual at {t}"));
            }
        }
        let seqs: Vec<Vec<f64>> = (0..20)
            .map(|_| {
                let mut v: Vec<f64> = (0..6).map(|_| rng.random_range(1e-4..1.0 - 1e-4)).collect();
                v.sort_by(f64::total_cmp);
                v.dedup();
                v
            })
            .collect();
        if !lemma_bound_check(m, a, b, &seqs).map_err(fail)? {
            return Err(format!("({m},{a},{b}) bound fails"));
        }
    }
    Ok("identities and bounds hold for m <= 6".into())
}

fn sampler(seed: u64) -> Verdict {
    let posets = [
        ("P_2^(3,1,2)", cluster_poset(&ClusterParams::new(3, 1, 2, 2).map_err(fail)?)),
        ("P_2^(4,1,3)", cluster_poset(&ClusterParams::new(4, 1, 3, 2).map_err(fail)?)),
        ("antichain(3)", FinitePoset::antichain(3)),
    ];
    let mut worst = 0.0f64;
    for (name, poset) in &posets {
        let tv = uniformity_tv(poset, 10_000, seed, 11).map_err(fail)?;
        if tv >= 0.05 {
            return Err(format!("{name}: TV {tv}"));
        }
        worst = worst.max(tv);
    }
    Ok(format!("worst TV {worst:.4}"))
}

fn patterns() -> Verdict {
    let s4: Vec<PatternPerm> = all_permutations(4).collect();
    for n in 1..=7 {
        let hist = occurrence_histograms(&s4, n).map_err(fail)?;
        for (k, q) in s4.iter().enumerate() {
            for r in q.symmetry_class() {
                let j = s4.iter().position(|s| *s == r).expect("S_4 is closed under symmetries");
                if hist[k].counts != hist[j].counts {
                    return Err(format!("{q} vs {r} at n = {n}"));
                }
            }
        }
    }
    Ok("S_4 symmetry classes, n <= 7".into())
}

pub fn run(seed: u64, output: &Output) -> Result<String, Failure> {
    let suites: Vec<Suite> = vec![
        ("exact_vs_bruteforce", Box::new(exact_vs_brute)),
        ("sandwich", Box::new(sandwich)),
        ("mirror_symmetry", Box::new(mirror)),
        ("concavity", Box::new(concavity)),
        ("profile_identities", Box::new(move || profile(seed))),
        ("sampler_uniformity", Box::new(move || sampler(seed))),
        ("pattern_symmetries", Box::new(patterns)),
    ];
    let mut report = Report::new(&["suite", "status", "detail"]);
    let mut failed = 0;
    for (name, suite) in suites {
        let (status, detail) = match suite() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        // details land in CSV cells
        report.push(vec![Cell::text(name), Cell::text(status), Cell::text(detail.replace(',', ";"))]);
    }
    let text = report.fact("failed", failed).render(output.format);
    if failed > 0 {
        Err(Failure::Check(failed, text))
    } else {
        Ok(text)
    }
}
