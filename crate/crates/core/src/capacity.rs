//! Holevo and symbol-by-symbol rates, and free-space link budgets.

use std::f64::consts::PI;

use libm::erfc;

use crate::channel::{binary_entropy, helstrom_binary_error};
use crate::code::Detector;
use crate::error::{invalid, Result};
use crate::transduction::herald_prob_ipp;

pub const PLANCK: f64 = 6.626_070_15e-34;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const MOON_DISTANCE: f64 = 3.844e8;
/// Chosen so the Mars uplink receives about 1e-2 photons per pulse.
pub const MARS_DISTANCE: f64 = 5.57e10;

fn check_n(n: f64) -> Result<()> {
    if n.is_finite() && n >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("mean photon number must be finite and >= 0, got {n}")))
    }
}

/// Holevo capacity of the BPSK alphabet, `h2((1 + e^{-2N}) / 2)`.
pub fn holevo_bpsk(n: f64) -> Result<f64> {
    check_n(n)?;
    binary_entropy((1.0 + (-2.0 * n).exp()) / 2.0)
}

/// Holevo rate discounted by the transduction herald probability.
pub fn achievable_rate(n: f64) -> Result<f64> {
    check_n(n)?;
    Ok(herald_prob_ipp(n.sqrt())? * holevo_bpsk(n)?)
}

/// Capacity of the binary symmetric channel induced by symbol detection.
pub fn c1_rate(n: f64, detector: Detector) -> Result<f64> {
    check_n(n)?;
    if n == 0.0 {
        return Err(invalid("symbol-detection rate needs N > 0"));
    }
    let p = match detector {
        Detector::Helstrom => helstrom_binary_error((-2.0 * n).exp())?,
        Detector::Homodyne => 0.5 * erfc((2.0 * n).sqrt()),
    };
    Ok(1.0 - binary_entropy(p)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkSpec {
    pub name: String,
    pub wavelength: f64,
    pub tx_diameter: f64,
    pub rx_diameter: f64,
    pub distance: f64,
    pub power: f64,
    pub pulse_width: f64,
}

impl LinkSpec {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("wavelength", self.wavelength),
            ("tx_diameter", self.tx_diameter),
            ("rx_diameter", self.rx_diameter),
            ("distance", self.distance),
            ("pulse_width", self.pulse_width),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{}: {name} must be positive, got {v}", self.name)));
            }
        }
        if !(self.power.is_finite() && self.power >= 0.0) {
            return Err(invalid(format!("{}: power must be >= 0, got {}", self.name, self.power)));
        }
        Ok(())
    }
}

/// The four lunar and Martian links: 1.6 um light, 0.4 m ground and 0.1 m
/// remote apertures, 10 W uplinks and 0.5 W downlinks.
pub fn builtin_links() -> Vec<LinkSpec> {
    const EARTH: f64 = 0.4;
    const REMOTE: f64 = 0.1;
    let link = |name: &str, distance: f64, up: bool, pulse_width: f64| LinkSpec {
        name: name.to_string(),
        wavelength: 1.6e-6,
        tx_diameter: if up { EARTH } else { REMOTE },
        rx_diameter: if up { REMOTE } else { EARTH },
        distance,
        power: if up { 10.0 } else { 0.5 },
        pulse_width,
    };
    vec![
        link("moon-uplink", MOON_DISTANCE, true, 10e-12),
        link("moon-downlink", MOON_DISTANCE, false, 10e-12),
        link("mars-uplink", MARS_DISTANCE, true, 1e-9),
        link("mars-downlink", MARS_DISTANCE, false, 1e-9),
    ]
}

/// Far-field aperture coupling `(pi D_t D_r / (4 lambda L))^2`, capped at 1.
pub fn link_transmissivity(spec: &LinkSpec) -> Result<f64> {
    spec.validate()?;
    let root = PI * spec.tx_diameter * spec.rx_diameter / (4.0 * spec.wavelength * spec.distance);
    Ok((root * root).min(1.0))
}

/// Mean photon number per received pulse.
pub fn received_mean_photons(spec: &LinkSpec) -> Result<f64> {
    let eta = link_transmissivity(spec)?;
    let photon_energy = PLANCK * SPEED_OF_LIGHT / spec.wavelength;
    Ok(eta * spec.power * spec.pulse_width / photon_energy)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkBudgetRow {
    pub name: String,
    pub transmissivity: f64,
    pub mean_photon: f64,
    pub holevo: f64,
    pub achievable: f64,
    pub c1_helstrom: f64,
    pub c1_homodyne: f64,
    /// `achievable / c1_homodyne`.
    pub ratio: f64,
    /// `achievable / c1_helstrom`.
    pub ratio_helstrom: f64,
}

pub fn link_budget_row(spec: &LinkSpec) -> Result<LinkBudgetRow> {
    let n = received_mean_photons(spec)?;
    let achievable = achievable_rate(n)?;
    let c1_helstrom = c1_rate(n, Detector::Helstrom)?;
    let c1_homodyne = c1_rate(n, Detector::Homodyne)?;
    Ok(LinkBudgetRow {
        name: spec.name.clone(),
        transmissivity: link_transmissivity(spec)?,
        mean_photon: n,
        holevo: holevo_bpsk(n)?,
        achievable,
        c1_helstrom,
        c1_homodyne,
        ratio: achievable / c1_homodyne,
        ratio_helstrom: achievable / c1_helstrom,
    })
}

pub fn link_budget_table_for(specs: &[LinkSpec]) -> Result<Vec<LinkBudgetRow>> {
    specs.iter().map(link_budget_row).collect()
}

pub fn link_budget_table() -> Result<Vec<LinkBudgetRow>> {
    link_budget_table_for(&builtin_links())
}
