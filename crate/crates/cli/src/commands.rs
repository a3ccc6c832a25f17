//! Subcommand implementations returning their text output.

use std::fmt::Write;

use anyhow::Result;
use bpqm_core::capacity::{link_budget_table_for, LinkBudgetRow};
use bpqm_core::channel::ChannelParams;
use bpqm_core::circuit::{build_first_bit_circuit, build_full_circuit, emit_qasm};
use bpqm_core::code::{classical_bound, Detector, Target};
use bpqm_core::receiver::{decode, jdr_compose, srm_block_limit};
use bpqm_core::transduction::{optimal_phi_bound, optimize_phi, TransductionConfig};
use rayon::prelude::*;

use crate::config::SweepConfig;

/// Two-qubit gate count of the reference hardware full decoder.
pub const REFERENCE_FULL_COUNT: usize = 81;

/// Twelve significant digits, locale independent.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn metadata(out: &mut String, command: &str, cfg: &SweepConfig) {
    let g = &cfg.grid;
    writeln!(out, "# bpqm {command}").unwrap();
    writeln!(out, "# seed = {}", cfg.seed).unwrap();
    writeln!(out, "# mode = {}", cfg.mode.as_str()).unwrap();
    writeln!(out, "# noise p1 = {}, p2 = {}, prep_fail = {}", cfg.p1, cfg.p2, cfg.prep_fail).unwrap();
    let spacing = if g.log { "log" } else { "linear" };
    writeln!(out, "# grid {} points {spacing} in [{}, {}]", g.points, g.min, g.max).unwrap();
}

pub const DECODER_COLUMNS: &str = "N,bpqm_first_bit,bpqm_block,classical_helstrom_first,classical_helstrom_block,classical_homodyne_block,srm_limit,jdr_first,jdr_block,mode,shots,seed";

pub fn sweep_decoder(cfg: &SweepConfig) -> Result<String> {
    cfg.validate()?;
    let grid = cfg.grid.values();
    let rows: Vec<String> = grid
        .par_iter()
        .enumerate()
        .map(|(i, &n)| -> Result<String> {
            let mode = cfg.mode_for_point(i);
            let first = decode(n, Target::FirstBit, &mode)?.error();
            let block = decode(n, Target::Block, &mode)?.error();
            let cells = [
                n,
                first,
                block,
                classical_bound(n, Detector::Helstrom, Target::FirstBit)?,
                classical_bound(n, Detector::Helstrom, Target::Block)?,
                classical_bound(n, Detector::Homodyne, Target::Block)?,
                srm_block_limit(n)?.error,
                jdr_compose(n, first)?,
                jdr_compose(n, block)?,
            ];
            let (shots, seed) = match mode {
                bpqm_core::receiver::Mode::Sampled { shots, seed, .. } => (shots, seed),
                _ => (0, cfg.seed),
            };
            let mut line: Vec<String> = cells.iter().map(|&x| num(x)).collect();
            line.extend([cfg.mode.as_str().to_string(), shots.to_string(), seed.to_string()]);
            Ok(line.join(","))
        })
        .collect::<Result<_>>()?;
    let mut out = String::new();
    metadata(&mut out, "sweep-decoder", cfg);
    writeln!(out, "{DECODER_COLUMNS}").unwrap();
    for r in rows {
        writeln!(out, "{r}").unwrap();
    }
    Ok(out)
}

pub const TRANSDUCTION_COLUMNS: &str =
    "N,helstrom,ipp_error,optimal_phi_error,pnr_error_n1,pnr_error_n2,pnr_error_n5";

pub fn sweep_transduction(cfg: &SweepConfig) -> Result<String> {
    cfg.grid.validate()?;
    let rows: Vec<String> = cfg
        .grid
        .values()
        .par_iter()
        .map(|&n| -> Result<String> {
            let beta = n.sqrt();
            let cells = [
                n,
                ChannelParams::from_mean_photon(n)?.helstrom_error(),
                TransductionConfig::inner_product_preserving(beta, 0)?.receiver_error(),
                optimal_phi_bound(beta)?.1,
                optimize_phi(beta, 1)?.1,
                optimize_phi(beta, 2)?.1,
                optimize_phi(beta, 5)?.1,
            ];
            Ok(cells.iter().map(|&x| num(x)).collect::<Vec<_>>().join(","))
        })
        .collect::<Result<_>>()?;
    let mut out = String::new();
    metadata(&mut out, "sweep-transduction", cfg);
    writeln!(out, "{TRANSDUCTION_COLUMNS}").unwrap();
    for r in rows {
        writeln!(out, "{r}").unwrap();
    }
    Ok(out)
}

pub const LINK_COLUMNS: &str =
    "name,transmissivity,N,holevo,achievable,c1_helstrom,c1_homodyne,ratio,ratio_helstrom";

fn link_cells(r: &LinkBudgetRow) -> [f64; 8] {
    [
        r.transmissivity,
        r.mean_photon,
        r.holevo,
        r.achievable,
        r.c1_helstrom,
        r.c1_homodyne,
        r.ratio,
        r.ratio_helstrom,
    ]
}

pub fn link_budget_csv(cfg: &SweepConfig) -> Result<String> {
    let mut out = format!("{LINK_COLUMNS}\n");
    for r in link_budget_table_for(&cfg.links)? {
        let cells: Vec<String> = link_cells(&r).iter().map(|&x| num(x)).collect();
        writeln!(out, "{},{}", r.name, cells.join(",")).unwrap();
    }
    Ok(out)
}

pub fn link_budget_pretty(cfg: &SweepConfig) -> Result<String> {
    let headers: Vec<&str> = LINK_COLUMNS.split(',').collect();
    let rows = link_budget_table_for(&cfg.links)?;
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut out = format!("{:<width$}", headers[0]);
    for h in &headers[1..] {
        write!(out, " {h:>14}").unwrap();
    }
    out.push('\n');
    for r in &rows {
        write!(out, "{:<width$}", r.name).unwrap();
        for x in link_cells(r) {
            write!(out, " {:>14}", format!("{x:.6e}")).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CircuitKind {
    FirstBit,
    Full,
}

pub struct EmittedCircuit {
    pub qasm: String,
    pub two_qubit_gates: usize,
    pub summary: String,
}

pub fn emit_circuit(kind: CircuitKind, n: f64) -> Result<EmittedCircuit> {
    let theta = ChannelParams::from_mean_photon(n)?.angle();
    let dc = match kind {
        CircuitKind::FirstBit => build_first_bit_circuit(theta)?,
        CircuitKind::Full => build_full_circuit(theta)?,
    };
    let count = dc.circuit.two_qubit_gate_count();
    let summary = match kind {
        CircuitKind::FirstBit => format!("two-qubit gates: {count}"),
        CircuitKind::Full => format!(
            "two-qubit gates: {count} (reference hardware full decoder: {REFERENCE_FULL_COUNT})"
        ),
    };
    Ok(EmittedCircuit { qasm: emit_qasm(&dc.circuit)?, two_qubit_gates: count, summary })
}

/// Per-codeword report for a single photon number.
pub fn simulate(kind: CircuitKind, n: f64, cfg: &SweepConfig) -> Result<String> {
    cfg.validate()?;
    let target = match kind {
        CircuitKind::FirstBit => Target::FirstBit,
        CircuitKind::Full => Target::Block,
    };
    let r = decode(n, target, &cfg.mode_for_point(0))?;
    let mut out = String::new();
    writeln!(out, "# bpqm simulate").unwrap();
    writeln!(out, "# seed = {}", cfg.seed).unwrap();
    writeln!(out, "# mode = {}", cfg.mode.as_str()).unwrap();
    writeln!(out, "# N = {n}").unwrap();
    writeln!(out, "codeword,first_bit_error,block_error").unwrap();
    let block = |b: Option<f64>| b.map(num).unwrap_or_default();
    for c in &r.per_codeword {
        writeln!(out, "{},{},{}", c.codeword, num(c.first_bit_error), block(c.block_error)).unwrap();
    }
    writeln!(out, "average,{},{}", num(r.first_bit_error), block(r.block_error)).unwrap();
    Ok(out)
}
