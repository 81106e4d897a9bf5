use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use datamule::io::write_atomic;
use datamule::metrics::{write_sweep_csv, write_threshold_csv};
use datamule::persistence::PersistentConfig;
use datamule::reduction::{brute_force_tour, cluster_bases, invert_weights};
use datamule::svg::{line_plot, render_paths, Series};
use datamule::{plan_round, run_persistent, run_sweep, solve_exact, unvisited_vs_threshold, Error, Scenario};
use serde_json::json;

use crate::config::{RunSpec, ScenarioConfig};
use crate::report;

/// Settings shared by every subcommand after flags are applied.
pub struct Ctx {
    pub cfg: ScenarioConfig,
    pub out: PathBuf,
    pub svg: bool,
    pub scenario: Option<Scenario>,
}

impl Ctx {
    fn write(&self, name: &str, bytes: &[u8]) -> anyhow::Result<PathBuf> {
        let path = self.out.join(name);
        write_atomic(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

pub fn plan(ctx: &Ctx) -> anyhow::Result<()> {
    let s = ctx.cfg.build(ctx.scenario)?;
    let round = plan_round(&s.network, &s.fleet, &s.params)?;
    ctx.write("plans.csv", &report::plans_csv(&round)?)?;
    ctx.write("summary.csv", &report::summary_csv(&round)?)?;
    if ctx.svg {
        ctx.write("paths.svg", render_paths(&s.network, &round, "Collection and delivery paths").as_bytes())?;
    }
    println!(
        "Z = {:.3}; {} of {} sinks unvisited; artifacts in {}",
        round.total_z,
        round.unvisited.len(),
        s.network.sink_count(),
        ctx.out.display()
    );
    Ok(())
}

pub fn persist(ctx: &Ctx, rounds: Option<usize>, round_svgs: bool) -> anyhow::Result<()> {
    let s = ctx.cfg.build(ctx.scenario)?;
    let config = match (&ctx.cfg.run, rounds) {
        (_, Some(n)) => PersistentConfig::new(n),
        (RunSpec::Persistent { max_rounds, stop_on_period }, None) => {
            PersistentConfig { max_rounds: *max_rounds, stop_on_period: *stop_on_period }
        }
        _ => return Err(Error::Config("persist needs run.mode = persistent or --rounds".into()).into()),
    };
    let run = run_persistent(&s.network, &s.fleet, &s.params, config)?;
    let last = run.rounds.last().expect("at least one round");
    ctx.write("plans.csv", &report::plans_csv(last)?)?;
    ctx.write("summary.csv", &report::summary_csv(last)?)?;
    ctx.write("rounds.csv", &report::rounds_csv(&run)?)?;
    if ctx.svg {
        ctx.write("paths.svg", render_paths(&s.network, last, "Last round").as_bytes())?;
        if round_svgs {
            for (k, r) in run.rounds.iter().enumerate() {
                let title = format!("Round {}", k + 1);
                ctx.write(&format!("round_{:03}.svg", k + 1), render_paths(&s.network, r, &title).as_bytes())?;
            }
        }
    }
    match run.period {
        Some(p) => {
            println!("{} rounds; paths repeat every {} round(s) from round {}", run.rounds.len(), p.length, p.start + 1)
        }
        None => println!("{} rounds; no repetition observed", run.rounds.len()),
    }
    Ok(())
}

pub fn sweep(ctx: &Ctx) -> anyhow::Result<()> {
    let s = ctx.cfg.build(ctx.scenario)?;
    if let Some(schedule) = ctx.cfg.run.schedule()? {
        let records = run_sweep(&s.network, &s.fleet, &s.params, &schedule)?;
        let mut buf = Vec::new();
        write_sweep_csv(&records, &mut buf)?;
        ctx.write("sweep.csv", &buf)?;
        if ctx.svg {
            let mut series: Vec<Series> = s
                .fleet
                .iter()
                .map(|u| Series {
                    name: format!("UAV {}", u.id),
                    points: records.iter().map(|r| ((r.run_index + 1) as f64, r.per_uav_cost[&u.id])).collect(),
                })
                .collect();
            series.push(Series {
                name: "average".into(),
                points: records.iter().map(|r| ((r.run_index + 1) as f64, r.average_cost)).collect(),
            });
            let title = format!("Cost per run ({} sweep)", schedule.param);
            ctx.write("sweep.svg", line_plot(&title, "run", "energy", &series).as_bytes())?;
        }
        println!("{} runs written to {}", records.len(), ctx.out.join("sweep.csv").display());
        return Ok(());
    }
    if let Some((kind, thresholds)) = ctx.cfg.run.threshold_kind()? {
        let points = unvisited_vs_threshold(&s.network, &s.fleet, &s.params, &thresholds, kind)?;
        let mut buf = Vec::new();
        write_threshold_csv(kind, &points, &mut buf)?;
        ctx.write("unvisited.csv", &buf)?;
        if ctx.svg {
            let series =
                [Series { name: "unvisited".into(), points: points.iter().map(|&(t, c)| (t, c as f64)).collect() }];
            ctx.write("unvisited.svg", line_plot("Unvisited sinks", "threshold (min)", "sinks", &series).as_bytes())?;
        }
        for (t, c) in &points {
            println!("{:>10}  {c}", datamule::serde_ext::format_threshold(*t));
        }
        return Ok(());
    }
    Err(Error::Config("sweep needs run.mode = sweep or threshold_sweep".into()).into())
}

pub fn verify(ctx: &Ctx) -> anyhow::Result<()> {
    let s = ctx.cfg.build(ctx.scenario)?;
    let limits = ctx.cfg.limits();
    let greedy = plan_round(&s.network, &s.fleet, &s.params)?;
    let exact = solve_exact(&s.network, &s.fleet, &s.params, limits)?;
    let gap = if exact.total_z > 0.0 {
        greedy.total_z / exact.total_z
    } else if greedy.total_z == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    let assignments = exact
        .assignments
        .iter()
        .map(|(u, sinks)| format!("{u}:{}", sinks.iter().map(ToString::to_string).collect::<Vec<_>>().join(">")))
        .collect::<Vec<_>>()
        .join(";");
    let mut rows = vec![
        ("sinks", s.network.sink_count().to_string()),
        ("uavs", s.fleet.len().to_string()),
        ("greedy_z", greedy.total_z.to_string()),
        ("greedy_unvisited", greedy.unvisited.len().to_string()),
        ("exact_z", exact.total_z.to_string()),
        ("exact_unvisited", exact.unvisited.len().to_string()),
        ("gap_ratio", gap.to_string()),
        ("configurations", exact.explored.to_string()),
        ("exact_assignment", assignments),
    ];
    if let Some(vrp) = &s.vrp {
        let tour = brute_force_tour(vrp)?;
        let single = solve_exact(&s.network, &s.fleet[..1], &s.params, limits)?;
        let agree = (tour.cost - single.total_z).abs() <= 1e-9 * tour.cost.abs().max(1.0);
        rows.push(("vrp_tour_cost", tour.cost.to_string()));
        rows.push(("single_uav_exact_z", single.total_z.to_string()));
        rows.push(("tour_costs_agree", agree.to_string()));
    }
    ctx.write("verify.csv", &report::key_value_csv(&rows)?)?;
    for (k, v) in &rows {
        println!("{k:<20} {v}");
    }
    Ok(())
}

pub fn reduce(ctx: &Ctx) -> anyhow::Result<()> {
    let (net, vrp) = ctx.cfg.build_network()?;
    match vrp {
        Some(v) => {
            let (reduced, fleet, params) = datamule::vrp_to_datamuling(&v)?;
            ctx.write("reduced_network.json", reduced.to_json()?.as_bytes())?;
            let fleet: Vec<_> =
                fleet.iter().map(|u| json!({"id": u.id, "speed": u.speed, "home_base": u.home_base})).collect();
            let config = json!({
                "network": {"source": "file", "path": "reduced_network.json"},
                "fleet": fleet,
                "params": {"alpha": params.alpha, "beta": params.beta, "gamma": params.gamma},
                "run": {"mode": "single"},
            });
            ctx.write("reduced_config.json", serde_json::to_string_pretty(&config)?.as_bytes())?;
            println!("{} customers reduced to a {}-sink network", v.customers.len(), reduced.sink_count());
        }
        None => {
            let clustered = cluster_bases(&net)?;
            let inverted = invert_weights(&clustered)?;
            ctx.write("clustered_network.json", clustered.to_json()?.as_bytes())?;
            ctx.write("inverted_network.json", inverted.to_json()?.as_bytes())?;
            println!("{} base stations clustered into one; weights inverted", net.bases().len());
        }
    }
    Ok(())
}

pub fn gen(ctx: &Ctx) -> anyhow::Result<()> {
    let (net, _) = ctx.cfg.build_network()?;
    let path = ctx.write("network.json", net.to_json()?.as_bytes())?;
    println!("{} sinks, {} base stations -> {}", net.sink_count(), net.bases().len(), path.display());
    Ok(())
}

pub fn output_dir(cfg: &ScenarioConfig, flag: Option<&Path>) -> PathBuf {
    match (flag, &cfg.output) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => cfg.resolve_path(p),
        (None, None) => PathBuf::from("out"),
    }
}

pub fn ensure_not_file(dir: &Path) -> anyhow::Result<()> {
    if dir.is_file() {
        bail!("output path {} is a file", dir.display());
    }
    Ok(())
}
