use clusterlin::asym::{c_constant, compare_constants, crossover_search, fit_sweep};
use clusterlin::exactcount::exact_count;
use clusterlin::mcmc::{concentration_report, height_profile};
use clusterlin::perm::classify as classify_patterns;
use clusterlin::poset::{build, cluster_dot, count_linear_extensions_bruteforce, ClusterParams};
use clusterlin::varfun::{Profile, ProfileTable, Slope};
use clusterlin::{Error, Variant};

use crate::report::{Cell, Format, Report};
use crate::svg::{self, Series, Style};
use crate::{Failure, Method, Output, Plot, Shape, VariantArg};

type Outcome = Result<String, Failure>;

fn params(shape: Shape, n: usize) -> Result<ClusterParams, Error> {
    ClusterParams::new(shape.m, shape.a, shape.b, n)
}

fn write_svg(plot: &Plot, contents: impl FnOnce() -> String) -> Result<(), Failure> {
    if let Some(path) = &plot.svg {
        std::fs::write(path, contents()).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    }
    Ok(())
}

fn curve_of(profile: &Profile, cells: usize) -> Vec<(f64, f64)> {
    (0..=cells)
        .map(|k| {
            let t = k as f64 / cells as f64;
            (t, profile.f(t).expect("t lies in [0,1]"))
        })
        .collect()
}

pub fn count(shape: Shape, n: usize, variant: VariantArg, method: Method, output: &Output) -> Outcome {
    let p = params(shape, n)?;
    let variant = Variant::from(variant);
    let value = match method {
        Method::Exact => exact_count(&p, variant)?,
        Method::Brute => count_linear_extensions_bruteforce(&build(&p, variant))?,
    };
    let mut report = Report::default()
        .fact("m", p.m)
        .fact("a", p.a)
        .fact("b", p.b)
        .fact("n", p.n)
        .fact("variant", Cell::text(variant))
        .fact("size", p.size(variant))
        .fact("count", Cell::int(&value));
    report.plain = Some(value.to_string());
    Ok(report.render(output.format))
}

pub fn constant(shape: Shape, output: &Output) -> Outcome {
    let c = c_constant(shape.m, shape.a, shape.b)?;
    let mut report =
        Report::default().fact("m", c.m).fact("a", c.a).fact("b", c.b).fact("leading", c.leading).fact("c", c.c);
    report.plain = Some(format!("leading={} c={}", c.leading, clusterlin::varfun::format_sig(c.c)));
    Ok(report.render(output.format))
}

pub fn fit(shape: Shape, n_max: usize, output: &Output, plot: &Plot) -> Outcome {
    let c = c_constant(shape.m, shape.a, shape.b)?;
    let ns: Vec<usize> = (1..=n_max).collect();
    if ns.is_empty() {
        return Err(Error::InvalidInput("n-max must be positive".into()).into());
    }
    let rows = fit_sweep(shape.m, shape.a, shape.b, &ns)?;
    let mut report = Report::new(&["n", "estimate", "residual", "envelope"]).fact("leading", c.leading).fact("c", c.c);
    for r in &rows {
        report.push(vec![r.n.into(), r.estimate.into(), r.residual.into(), r.envelope.into()]);
    }
    write_svg(plot, || {
        svg::Plot {
            title: format!("empirical constant, (m,a,b) = ({},{},{})", shape.m, shape.a, shape.b),
            x_label: "n".into(),
            y_label: "(ln e(P_n) - leading n ln n) / n".into(),
            series: vec![
                Series {
                    name: "estimate".into(),
                    points: rows.iter().map(|r| (r.n as f64, r.estimate)).collect(),
                    style: Style::Markers,
                    color: "#1f77b4",
                },
                Series {
                    name: format!("c = {}", clusterlin::varfun::format_sig(c.c)),
                    points: vec![(1.0, c.c), (n_max as f64, c.c)],
                    style: Style::Line,
                    color: "black",
                },
            ],
        }
        .render()
    })?;
    Ok(report.render(output.format))
}

pub fn compare(shape: Shape, a2: usize, b2: usize, n_max: usize, output: &Output, plot: &Plot) -> Outcome {
    let (m, a, b) = (shape.m, shape.a, shape.b);
    let crossover = crossover_search(m, a, b, a2, b2, n_max)?;
    let mut report = Report::new(&["n", "left", "right", "ordering", "log_ratio"]);
    if b - a >= 2 {
        let cmp = compare_constants(m, a, b, a2, b2)?;
        report =
            report.fact("constant_gap", cmp.gap).fact("constant_ordering", Cell::text(format!("{:?}", cmp.ordering)));
    }
    report = report.fact("n0", crossover.n0.map_or_else(|| Cell::text("none"), Cell::from));
    let mut ratios = Vec::new();
    for r in &crossover.rows {
        let ratio = r.left.ln() - r.right.ln();
        ratios.push((r.n as f64, ratio));
        report.push(vec![
            r.n.into(),
            Cell::int(&r.left),
            Cell::int(&r.right),
            Cell::text(format!("{:?}", r.ordering)),
            ratio.into(),
        ]);
    }
    write_svg(plot, || {
        svg::Plot {
            title: format!("ln e(P_n^({m},{a},{b})) - ln e(P_n^({m},{a2},{b2}))"),
            x_label: "n".into(),
            y_label: "log ratio".into(),
            series: vec![
                Series { name: "log ratio".into(), points: ratios.clone(), style: Style::Line, color: "#1f77b4" },
                Series {
                    name: "0".into(),
                    points: vec![(1.0, 0.0), (n_max as f64, 0.0)],
                    style: Style::Line,
                    color: "#999999",
                },
            ],
        }
        .render()
    })?;
    Ok(report.render(output.format))
}

pub fn profile(shape: Shape, points: usize, output: &Output, plot: &Plot) -> Outcome {
    let table = ProfileTable::build(shape.m, shape.a, shape.b, points)?;
    let text = match output.format {
        Format::Csv => table.to_csv(),
        _ => {
            let mut report = Report::new(&["t", "f", "fprime"])
                .fact("lambda", table.lambda)
                .fact("degenerate", Cell::text(table.degenerate));
            for ((t, f), fp) in table.grid.iter().zip(&table.f_values).zip(&table.fprime_values) {
                let fp = match fp {
                    Slope::Finite(v) => Cell::from(*v),
                    Slope::Infinite => Cell::text("inf"),
                };
                report.push(vec![(*t).into(), (*f).into(), fp]);
            }
            report.render(output.format)
        }
    };
    write_svg(plot, || {
        let curve = table.grid.iter().copied().zip(table.f_values.iter().copied()).collect();
        let lambda = table.profile.f(table.lambda).expect("lambda lies in [0,1]");
        svg::Plot {
            title: format!("f for (m,a,b) = ({},{},{})", shape.m, shape.a, shape.b),
            x_label: "t".into(),
            y_label: "f(t)".into(),
            series: vec![
                Series { name: "f".into(), points: curve, style: Style::Line, color: "black" },
                Series {
                    name: "lambda".into(),
                    points: vec![(table.lambda, lambda)],
                    style: Style::Markers,
                    color: "#d62728",
                },
            ],
        }
        .render()
    })?;
    Ok(text)
}

#[allow(clippy::too_many_arguments)]
pub fn sample(
    shape: Shape,
    n: usize,
    samples: usize,
    burnin: Option<u64>,
    thinning: Option<u64>,
    seed: u64,
    output: &Output,
    plot: &Plot,
) -> Outcome {
    let p = params(shape, n)?;
    let heights = height_profile(&p, samples, burnin, thinning, seed)?;
    let summary = concentration_report(&heights);
    let text = match output.format {
        Format::Csv => heights.to_csv(),
        _ => {
            let mut report = Report::new(&["i", "mean_height", "reference_f", "abs_deviation"])
                .fact("samples", heights.samples)
                .fact("chains", heights.chains)
                .fact("burnin", heights.burnin)
                .fact("thinning", heights.thinning)
                .fact("seed", heights.seed)
                .fact("max_deviation", summary.max_deviation)
                .fact("mean_deviation", summary.mean_deviation);
            for r in &summary.rows {
                report.push(vec![r.i.into(), r.mean_height.into(), r.reference.into(), r.deviation.into()]);
            }
            report.render(output.format)
        }
    };
    write_svg(plot, || {
        let profile = Profile::new(p.m, p.a, p.b).expect("validated parameters");
        let scale = (n + 2) as f64;
        svg::Plot {
            title: format!("spine heights in P_{n}^({},{},{})", p.m, p.a, p.b),
            x_label: format!("(i+1)/{}", n + 2),
            y_label: "mean normalized height".into(),
            series: vec![
                Series { name: "f".into(), points: curve_of(&profile, 400), style: Style::Line, color: "black" },
                Series {
                    name: "X_i".into(),
                    points: summary.rows.iter().map(|r| ((r.i as f64 + 1.0) / scale, r.mean_height)).collect(),
                    style: Style::Markers,
                    color: "#d62728",
                },
            ],
        }
        .render()
    })?;
    Ok(text)
}

pub fn classify(m: usize, n_max: usize, weak: bool, output: &Output) -> Outcome {
    let classes = classify_patterns(m, n_max, !weak)?;
    let mut report = Report::new(&["class", "size", "members"])
        .fact("m", m)
        .fact("n_max", n_max)
        .fact("mode", Cell::text(if weak { "weak" } else { "strong" }))
        .fact("classes", classes.len());
    for (k, class) in classes.iter().enumerate() {
        let members: Vec<String> = class.iter().map(ToString::to_string).collect();
        report.push(vec![(k + 1).into(), class.len().into(), Cell::text(members.join(" "))]);
    }
    Ok(report.render(output.format))
}

pub fn poset(shape: Shape, n: usize, variant: VariantArg, plot: &Plot) -> Outcome {
    let p = params(shape, n)?;
    let variant = Variant::from(variant);
    write_svg(plot, || svg::hasse(&p, variant))?;
    Ok(cluster_dot(&p, variant))
}
