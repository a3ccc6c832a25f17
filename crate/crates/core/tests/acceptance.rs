//! Acceptance suite: one line per criterion, then a single verdict.

use std::f64::consts::FRAC_PI_2;

use bpqm_core::capacity::{builtin_links, link_budget_row, received_mean_photons};
use bpqm_core::channel::ChannelParams;
use bpqm_core::circuit::{build_first_bit_circuit, build_full_circuit, emit_qasm};
use bpqm_core::code::{classical_bound, codebook, Detector, Target};
use bpqm_core::receiver::{
    bitwise_helstrom_oracle, block_error, codeword_qubits, first_bit_closed_form, first_bit_error,
    srm_block_limit, srm_block_limit_sigma, staged_oracle_block_error, Mode,
};
use bpqm_core::simulator::{run_density, run_exact, sample, NoiseModel};
use bpqm_core::transduction::{
    optimal_phi_bound, optimize_phi, phi_inner_product_preserving, pnr_receiver_error,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn log_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| min * (max / min).powf(i as f64 / (points - 1) as f64))
        .collect()
}

fn grid() -> Vec<f64> {
    log_grid(1e-3, 1.0, 20)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn first_bit_triple_agreement() -> Check {
    let mut worst: f64 = 0.0;
    for n in grid() {
        let gate = first_bit_error(n, &Mode::Exact).map_err(err)?;
        let closed = first_bit_closed_form(n).map_err(err)?;
        let oracle = bitwise_helstrom_oracle(n, 1).map_err(err)?;
        worst = worst.max((gate - closed).abs()).max((oracle - closed).abs());
    }
    ensure(worst <= 1e-9, || format!("max disagreement {worst:e}"))?;
    let at = first_bit_error(0.01, &Mode::Exact).map_err(err)?;
    ensure((at - 0.392655).abs() <= 1e-5, || format!("N=0.01 gives {at}"))?;
    Ok(format!("max disagreement {worst:.1e}, N=0.01 -> {at:.6}"))
}

fn full_decoder_oracle_equality() -> Check {
    let mut worst: f64 = 0.0;
    for n in grid() {
        let gate = block_error(n, &Mode::Exact).map_err(err)?;
        let oracle = staged_oracle_block_error(n).map_err(err)?;
        worst = worst.max((gate - oracle).abs());
    }
    ensure(worst <= 1e-9, || format!("max gap {worst:e}"))?;
    Ok(format!("max gap {worst:.1e}"))
}

fn quantum_advantage_ordering() -> Check {
    for n in grid() {
        let srm = srm_block_limit(n).map_err(err)?.error;
        let bpqm = block_error(n, &Mode::Exact).map_err(err)?;
        let hel = classical_bound(n, Detector::Helstrom, Target::Block).map_err(err)?;
        let hom = classical_bound(n, Detector::Homodyne, Target::Block).map_err(err)?;
        ensure(srm <= bpqm + 1e-12 && bpqm <= hel && hel <= hom, || {
            format!("N={n}: srm {srm}, bpqm {bpqm}, helstrom {hel}, homodyne {hom}")
        })?;
    }
    let srm = srm_block_limit(0.01).map_err(err)?.error;
    let hel = classical_bound(0.01, Detector::Helstrom, Target::Block).map_err(err)?;
    ensure((srm - 0.588984).abs() <= 1e-4, || format!("srm at 0.01 is {srm}"))?;
    ensure((hel - 0.641190).abs() <= 1e-4, || format!("helstrom block at 0.01 is {hel}"))?;
    let first = first_bit_error(0.01, &Mode::Exact).map_err(err)?;
    let symbol = ChannelParams::from_mean_photon(0.01).map_err(err)?.helstrom_error();
    ensure(first < symbol && (symbol - 0.400992).abs() <= 1e-5, || {
        format!("first bit {first} vs symbol Helstrom {symbol}")
    })?;
    Ok(format!("N=0.01 brackets [{srm:.6}, {hel:.6}], first bit {first:.6} < {symbol:.6}"))
}

fn transduction_optimum() -> Check {
    for beta in [0.05, 0.1, 0.5, 1.0] {
        let (phi, _) = optimize_phi(beta, 0).map_err(err)?;
        ensure((phi - FRAC_PI_2).abs() <= 1e-6, || format!("beta={beta}: phi = {phi}"))?;
    }
    let (_, e) = optimize_phi(1.0, 0).map_err(err)?;
    ensure((e - 0.264241).abs() <= 1e-6, || format!("beta=1 error {e}"))?;
    Ok(format!("phi = pi/2 at all four amplitudes, beta=1 error {e:.6}"))
}

fn transduction_curve_ordering() -> Check {
    for n in log_grid(1e-3, 10.0, 50) {
        let beta = n.sqrt();
        let helstrom = ChannelParams::from_mean_photon(n).map_err(err)?.helstrom_error();
        let optimal = optimal_phi_bound(beta).map_err(err)?.1;
        let ipp_phi = phi_inner_product_preserving(beta).map_err(err)?.phi;
        let ipp = pnr_receiver_error(beta, ipp_phi, 0).map_err(err)?;
        ensure(helstrom <= optimal + 1e-12 && optimal <= ipp + 1e-12, || {
            format!("N={n}: helstrom {helstrom}, optimal {optimal}, ipp {ipp}")
        })?;
        let mut last = optimize_phi(beta, 0).map_err(err)?.1;
        for k in [1, 2, 5] {
            let e = optimize_phi(beta, k).map_err(err)?.1;
            ensure(e <= last + 1e-12, || format!("N={n}: truncation {k} error {e} > {last}"))?;
            last = e;
        }
    }
    Ok("50 points ordered, truncations 0,1,2,5 nonincreasing".into())
}

fn noise_model_reproduction() -> Check {
    let reference = NoiseModel::new(1e-4, 5e-3, NoiseModel::DEFAULT_PREP_FAIL).map_err(err)?;
    for n in grid() {
        let clean = block_error(n, &Mode::Exact).map_err(err)?;
        let noisy = block_error(n, &Mode::Noisy(reference)).map_err(err)?;
        ensure(noisy > clean, || format!("N={n}: noisy {noisy} <= noiseless {clean}"))?;
        let mut last = clean;
        for p2 in [0.0, 2.5e-3, 5e-3, 1e-2] {
            let model = NoiseModel::new(1e-4, p2, NoiseModel::DEFAULT_PREP_FAIL).map_err(err)?;
            let e = block_error(n, &Mode::Noisy(model)).map_err(err)?;
            ensure(e >= last, || format!("N={n}: p2={p2} gives {e} < {last}"))?;
            last = e;
        }
    }
    let mut worst: f64 = 0.0;
    for n in grid() {
        let theta = ChannelParams::from_mean_photon(n).map_err(err)?.angle();
        for dc in [build_first_bit_circuit(theta).map_err(err)?, build_full_circuit(theta).map_err(err)?] {
            for word in codebook().iter() {
                let q = codeword_qubits(theta, word);
                let exact = run_exact(&dc.circuit, &q).map_err(err)?.distribution();
                let dens = run_density(&dc.circuit, &q, &NoiseModel::noiseless()).map_err(err)?;
                for r in exact.keys().chain(dens.keys()) {
                    let a = exact.get(r).copied().unwrap_or(0.0);
                    let b = dens.get(r).copied().unwrap_or(0.0);
                    worst = worst.max((a - b).abs());
                }
            }
        }
    }
    ensure(worst <= 1e-12, || format!("engines differ by {worst:e}"))?;
    Ok(format!("noise raises error and is monotone in p2; engines agree to {worst:.1e}"))
}

fn link_budget() -> Check {
    let links = builtin_links();
    let get = |name: &str| links.iter().find(|l| l.name == name).cloned().ok_or(format!("missing {name}"));
    let mars = get("mars-uplink")?;
    let moon = get("moon-uplink")?;
    let n_mars = received_mean_photons(&mars).map_err(err)?;
    let n_moon = received_mean_photons(&moon).map_err(err)?;
    ensure((0.005..=0.02).contains(&n_mars), || format!("Mars uplink N = {n_mars}"))?;
    ensure((n_moon / 2.1 - 1.0).abs() <= 0.2, || format!("Moon uplink N = {n_moon}"))?;
    let ratio = link_budget_row(&mars).map_err(err)?.ratio;
    ensure((3.5..=6.0).contains(&ratio), || format!("Mars ratio {ratio}"))?;
    Ok(format!("Mars N {n_mars:.6}, Moon N {n_moon:.4}, Mars ratio {ratio:.3}"))
}

fn srm_optimality_witness() -> Check {
    for k in 0..10 {
        let sigma = 0.05 + 0.1 * k as f64;
        let r = srm_block_limit_sigma(sigma).map_err(err)?;
        ensure(r.optimality_verified, || format!("sigma={sigma}: violation {:e}", r.max_violation))?;
    }
    let zero = srm_block_limit_sigma(0.0).map_err(err)?.error;
    let one = srm_block_limit_sigma(1.0).map_err(err)?.error;
    ensure(zero == 0.0 && one == 0.75, || format!("limits {zero}, {one}"))?;
    Ok("witness holds at 10 overlaps, limits 0 and 0.75".into())
}

fn sampling_statistics() -> Check {
    let theta = ChannelParams::from_mean_photon(0.01).map_err(err)?.angle();
    let circuit = build_first_bit_circuit(theta).map_err(err)?.circuit;
    let shots = 100_000u64;
    let mut worst: f64 = 0.0;
    for word in codebook().iter() {
        let q = codeword_qubits(theta, word);
        let exact = run_exact(&circuit, &q).map_err(err)?.distribution();
        let a = sample(&circuit, &q, shots, 0xC0DE, None).map_err(err)?;
        let b = sample(&circuit, &q, shots, 0xC0DE, None).map_err(err)?;
        ensure(a == b, || "identical seeds gave different counts".into())?;
        for (record, p) in &exact {
            let count = a.get(record).copied().unwrap_or(0) as f64;
            let sd = (shots as f64 * p * (1.0 - p)).sqrt().max(f64::MIN_POSITIVE);
            let z = (count - shots as f64 * p).abs() / sd;
            worst = worst.max(z);
            ensure(z <= 4.0, || format!("{word} record {record:?}: z = {z:.2}"))?;
        }
    }
    Ok(format!("max deviation {worst:.2} sd over all records"))
}

fn circuit_artifacts() -> Check {
    let theta = ChannelParams::from_mean_photon(0.01).map_err(err)?.angle();
    let first = build_first_bit_circuit(theta).map_err(err)?.circuit;
    let full = build_full_circuit(theta).map_err(err)?.circuit;
    let (nf, nb) = (first.two_qubit_gate_count(), full.two_qubit_gate_count());
    ensure(nf <= 6, || format!("first-bit count {nf}"))?;
    for c in [&first, &full] {
        let a = emit_qasm(c).map_err(err)?;
        let b = emit_qasm(&c.clone()).map_err(err)?;
        ensure(a == b, || "emission not deterministic".into())?;
    }
    Ok(format!("first bit {nf} two-qubit gates, full decoder {nb} (reference hardware decoder: 81)"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("first-bit triple agreement", first_bit_triple_agreement),
        ("full decoder equals staged oracle", full_decoder_oracle_equality),
        ("quantum advantage ordering", quantum_advantage_ordering),
        ("transduction optimum", transduction_optimum),
        ("transduction curve ordering", transduction_curve_ordering),
        ("noise model", noise_model_reproduction),
        ("link budget", link_budget),
        ("square-root measurement optimality", srm_optimality_witness),
        ("sampling statistics", sampling_statistics),
        ("circuit artifacts", circuit_artifacts),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
