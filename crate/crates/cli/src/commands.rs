use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use serde::Serialize;
use sha2::{Digest, Sha256};

use efxlab_core::*;

use crate::{Algo, Command, CommonOpts, DirectionArg, GenKind, Property, ReduceCommand};

#[derive(Serialize)]
struct RunReport {
    command: String,
    digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    result: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    steps: Option<u64>,
    wall_ms: u64,
}

fn digest_of(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

fn read_input(path: &Path) -> anyhow::Result<(String, String)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let digest = digest_of(text.as_bytes());
    Ok((text, digest))
}

fn parse_instance(text: &str) -> anyhow::Result<Instance> {
    serde_json::from_str(text).map_err(|e| anyhow!(Error::Parse(format!("instance JSON: {e}"))))
}

/// Accepts either a bare valuation file or a reduction artifact whose target
/// carries one.
fn parse_valuation(text: &str) -> anyhow::Result<Valuation> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| anyhow!(Error::Parse(format!("JSON: {e}"))))?;
    let candidate = if value.get("type").is_some() {
        value
    } else if let Some(inner) = value.pointer("/target/valuation") {
        inner.clone()
    } else {
        bail!(Error::Parse(
            "expected a valuation object or a reduction artifact with target.valuation".into()
        ));
    };
    serde_json::from_value(candidate)
        .map_err(|e| anyhow!(Error::Parse(format!("valuation JSON: {e}"))))
}

fn load_circuit(path: &Path) -> anyhow::Result<(BoolCircuit, String)> {
    let (text, digest) = read_input(path)?;
    let circuit = parse_circuit(&text)?;
    Ok((circuit, digest))
}

fn write_or_print(out: &Option<PathBuf>, payload: &str) -> anyhow::Result<bool> {
    match out {
        Some(path) => {
            fs::write(path, payload).with_context(|| format!("writing {}", path.display()))?;
            Ok(true)
        }
        None => {
            println!("{payload}");
            Ok(false)
        }
    }
}

fn print_report(report: &RunReport, out: &Option<PathBuf>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{text}"),
    }
    Ok(())
}

pub fn run(cmd: Command) -> anyhow::Result<u8> {
    match cmd {
        Command::Solve {
            instance,
            algo,
            cutter,
            verify,
            seed,
            trace,
            common,
        } => cmd_solve(&instance, algo, cutter, verify, seed, trace, &common),
        Command::CheckClass {
            valuation,
            property,
            prices,
            common,
        } => cmd_check_class(&valuation, property, prices.as_deref(), &common),
        Command::Gen {
            kind,
            m,
            seed,
            common,
        } => cmd_gen(kind, m, seed, &common),
        Command::Reduce { which } => match which {
            ReduceCommand::FlipToKneser { circuit, common } => cmd_reduce_flip(&circuit, &common),
            ReduceCommand::KneserToEfx { circuit, k, common } => {
                cmd_reduce_kneser(&circuit, k, &common)
            }
        },
        Command::Pipeline { circuit, common } => cmd_pipeline(&circuit, &common),
        Command::Search {
            circuit,
            k,
            direction,
            start,
            pivot,
            common,
        } => cmd_search(&circuit, k, direction, start, pivot.into(), &common),
        Command::Bench { corpus, common } => cmd_bench(&corpus, &common),
    }
}

fn shared_valuation(inst: &Instance) -> anyhow::Result<Valuation> {
    inst.shared_valuation()
        .cloned()
        .ok_or_else(|| anyhow!("this algorithm needs identical agents (use \"identical\": true)"))
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    path: &Path,
    algo: Algo,
    cutter: usize,
    verify: bool,
    seed: Option<u64>,
    trace_out: Option<PathBuf>,
    common: &CommonOpts,
) -> anyhow::Result<u8> {
    let started = Instant::now();
    let (text, digest) = read_input(path)?;
    let inst = parse_instance(&text)?;
    let limits = crate::limits_from(common);

    let mut verified_ok: Option<bool> = None;
    let (result, steps) = match algo {
        Algo::Greedy => {
            let v = shared_valuation(&inst)?;
            let (alloc, trace) = match seed {
                Some(s) => greedy_efx_seeded(&v, inst.agents(), s),
                None => greedy_efx(&v, inst.agents()),
            };
            match trace_out {
                Some(ref p) => fs::write(p, trace.to_log())
                    .with_context(|| format!("writing {}", p.display()))?,
                None => eprint!("{}", trace.to_log()),
            }
            let verdict = is_efx_identical(&v, &alloc)?;
            if verify {
                verified_ok = Some(verdict.is_ok());
            }
            let steps = trace.steps.len() as u64;
            (
                serde_json::json!({ "allocation": alloc, "efx": verdict }),
                Some(steps),
            )
        }
        Algo::CutAndChoose => {
            if inst.agents() != 2 {
                bail!("cut-and-choose needs exactly 2 agents");
            }
            if cutter > 1 {
                bail!("--cutter must be 0 or 1");
            }
            let (v_cut, v_choose) = (inst.valuation(cutter), inst.valuation(1 - cutter));
            let raw = cut_and_choose(v_cut, v_choose);
            // reorder bundles back to the instance's agent numbering
            let alloc = if cutter == 0 {
                raw
            } else {
                Allocation::new(vec![*raw.bundle(1), *raw.bundle(0)])?
            };
            let verdict = is_efx(inst.valuations(), &alloc)?;
            if verify {
                verified_ok = Some(verdict.is_ok());
            }
            (
                serde_json::json!({ "allocation": alloc, "efx": verdict }),
                Some(inst.goods() as u64),
            )
        }
        Algo::LeximinLocal => {
            let v = shared_valuation(&inst)?;
            let (solution, steps) = leximinpp_local_search_traced(&v, inst.agents());
            if verify {
                verified_ok = Some(match &solution {
                    IdenticalEfxSolution::Efx { allocation } => {
                        is_efx_identical(&v, allocation)?.is_ok()
                    }
                    IdenticalEfxSolution::NonMonotone { violation } => violation.verify(&v),
                });
            }
            (serde_json::json!({ "solution": solution }), Some(steps))
        }
        Algo::Brute => {
            let found = brute_force_efx(inst.valuations(), &limits)?;
            if verify {
                verified_ok = Some(!found.is_empty());
            }
            (
                serde_json::json!({
                    "efx_count": found.len(),
                    "allocation": found.first(),
                }),
                None,
            )
        }
    };

    let report = RunReport {
        command: "solve".into(),
        digest,
        seed,
        result,
        steps,
        wall_ms: started.elapsed().as_millis() as u64,
    };
    print_report(&report, &common.out)?;
    Ok(match verified_ok {
        Some(false) => 2,
        _ => 0,
    })
}

fn cmd_check_class(
    path: &Path,
    property: Property,
    prices: Option<&str>,
    common: &CommonOpts,
) -> anyhow::Result<u8> {
    let started = Instant::now();
    let (text, digest) = read_input(path)?;
    let v = parse_valuation(&text)?;
    let limits = crate::limits_from(common);

    let result = match property {
        Property::Monotone => serde_json::to_value(check_monotone(&v, &limits)?)?,
        Property::Submodular => serde_json::to_value(check_submodular(&v, &limits)?)?,
        Property::Cancelable => serde_json::to_value(check_cancelable(&v, &limits)?)?,
        Property::Wwl => serde_json::to_value(check_weakly_well_layered(&v, &limits)?)?,
        Property::WellLayeredAtPrice => {
            let raw = prices.ok_or_else(|| anyhow!("--prices is required for this property"))?;
            let p = PriceVector::parse(raw)?;
            serde_json::to_value(check_well_layered_at_price(&v, &p, &limits)?)?
        }
    };

    let report = RunReport {
        command: "check-class".into(),
        digest,
        seed: None,
        result,
        steps: None,
        wall_ms: started.elapsed().as_millis() as u64,
    };
    print_report(&report, &common.out)?;
    Ok(0)
}

fn cmd_gen(kind: GenKind, m: usize, seed: u64, common: &CommonOpts) -> anyhow::Result<u8> {
    let v = match kind {
        GenKind::Additive => gen::additive(m, seed),
        GenKind::BudgetAdditive => gen::budget_additive(m, seed),
        GenKind::Oxs => gen::oxs(m, seed),
        GenKind::UnitDemand => gen::unit_demand(m, seed),
        GenKind::CoverageSubmodular => gen::coverage_table(m, seed),
        GenKind::MonotoneTable => gen::monotone_table(m, seed),
    };
    let payload = serde_json::to_string_pretty(&v)?;
    if write_or_print(&common.out, &payload)? {
        println!(
            "{}",
            serde_json::json!({
                "command": "gen",
                "digest": digest_of(payload.as_bytes()),
                "seed": seed,
                "result": { "written": common.out.as_ref().unwrap() },
            })
        );
    }
    Ok(0)
}

fn cmd_reduce_flip(path: &Path, common: &CommonOpts) -> anyhow::Result<u8> {
    let (circuit, digest) = load_circuit(path)?;
    let flip = FlipInstance::new(circuit)?;
    let artifact = flip_to_kneser(&flip)?;
    emit_artifact(
        "reduce flip-to-kneser",
        &digest,
        &serde_json::to_value(&artifact)?,
        common,
    )
}

fn cmd_reduce_kneser(path: &Path, k: usize, common: &CommonOpts) -> anyhow::Result<u8> {
    let (circuit, digest) = load_circuit(path)?;
    let instance = KneserInstance::new(circuit, k, Direction::Maximize)?;
    let artifact = kneser_to_efx(&instance)?;
    emit_artifact(
        "reduce kneser-to-efx",
        &digest,
        &serde_json::to_value(&artifact)?,
        common,
    )
}

fn emit_artifact(
    command: &str,
    digest: &str,
    artifact: &serde_json::Value,
    common: &CommonOpts,
) -> anyhow::Result<u8> {
    let payload = serde_json::to_string_pretty(artifact)?;
    if write_or_print(&common.out, &payload)? {
        println!(
            "{}",
            serde_json::json!({
                "command": command,
                "digest": digest,
                "result": { "written": common.out.as_ref().unwrap() },
            })
        );
    }
    Ok(0)
}

fn cmd_pipeline(path: &Path, common: &CommonOpts) -> anyhow::Result<u8> {
    let started = Instant::now();
    let (circuit, digest) = load_circuit(path)?;
    let flip = FlipInstance::new(circuit)?;
    let run = end_to_end(&flip)?;
    let report = RunReport {
        command: "pipeline".into(),
        digest,
        seed: None,
        result: serde_json::json!({
            "flip_point": run.flip_point,
            "width": flip.width(),
            "kneser_point": run.kneser_point,
            "allocation": run.allocation,
            "verified": true,
        }),
        steps: Some(run.efx_steps),
        wall_ms: started.elapsed().as_millis() as u64,
    };
    print_report(&report, &common.out)?;
    Ok(0)
}

fn cmd_search(
    path: &Path,
    k: Option<usize>,
    direction: DirectionArg,
    start: Option<u64>,
    pivot: Pivot,
    common: &CommonOpts,
) -> anyhow::Result<u8> {
    let started = Instant::now();
    let (circuit, digest) = load_circuit(path)?;
    let instance = match k {
        Some(k) => {
            let dir = match direction {
                DirectionArg::Minimize => Direction::Minimize,
                DirectionArg::Maximize => Direction::Maximize,
            };
            LocalSearchInstance::Kneser(KneserInstance::new(circuit, k, dir)?)
        }
        None => LocalSearchInstance::Flip(FlipInstance::new(circuit)?),
    };
    let start = start.unwrap_or(match &instance {
        LocalSearchInstance::Flip(_) => 0,
        LocalSearchInstance::Kneser(kn) => (1u64 << kn.k()) - 1,
    });
    let outcome = local_search(&instance, start, pivot)?;
    let report = RunReport {
        command: "search".into(),
        digest,
        seed: None,
        result: serde_json::json!({
            "optimum": outcome.optimum,
            "objective": outcome.objective.to_string(),
            "start": start,
            "trajectory_len": outcome.trajectory.len(),
        }),
        steps: Some(outcome.steps),
        wall_ms: started.elapsed().as_millis() as u64,
    };
    print_report(&report, &common.out)?;
    Ok(0)
}

fn cmd_bench(corpus: &Path, common: &CommonOpts) -> anyhow::Result<u8> {
    let mut files: Vec<PathBuf> = fs::read_dir(corpus)
        .with_context(|| format!("reading {}", corpus.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();

    let mut rows = vec!["file,algo,m,n,steps,time_ms,efx_verified".to_string()];
    for file in &files {
        let (text, _) = read_input(file)?;
        let inst = match parse_instance(&text) {
            Ok(i) => i,
            Err(err) => {
                eprintln!("skipping {}: {err}", file.display());
                continue;
            }
        };
        let name = file
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .replace(',', "_");
        let (m, n) = (inst.goods(), inst.agents());

        if let Some(v) = inst.shared_valuation() {
            let t = Instant::now();
            let (alloc, trace) = greedy_efx(v, n);
            let greedy_ms = t.elapsed().as_millis();
            let ok = is_efx_identical(v, &alloc)?.is_ok();
            rows.push(format!(
                "{name},greedy,{m},{n},{},{greedy_ms},{ok}",
                trace.steps.len()
            ));

            let t = Instant::now();
            let (solution, steps) = leximinpp_local_search_traced(v, n);
            let lex_ms = t.elapsed().as_millis();
            let ok = match &solution {
                IdenticalEfxSolution::Efx { allocation } => {
                    is_efx_identical(v, allocation)?.is_ok()
                }
                IdenticalEfxSolution::NonMonotone { violation } => violation.verify(v),
            };
            rows.push(format!(
                "{name},leximin-local,{m},{n},{steps},{lex_ms},{ok}"
            ));
        } else if n == 2 {
            let t = Instant::now();
            let alloc = cut_and_choose(inst.valuation(0), inst.valuation(1));
            let ms = t.elapsed().as_millis();
            let ok = is_efx(inst.valuations(), &alloc)?.is_ok();
            rows.push(format!("{name},cut-and-choose,{m},{n},{m},{ms},{ok}"));
        } else {
            eprintln!(
                "skipping {}: no solver for {n} heterogeneous agents",
                file.display()
            );
        }
    }

    let csv = rows.join("\n") + "\n";
    match &common.out {
        Some(path) => {
            let mut f = fs::File::create(path)?;
            f.write_all(csv.as_bytes())?;
        }
        None => print!("{csv}"),
    }
    Ok(0)
}
