//! Flat `key = value` run configuration with `[section]` headers.

use std::fmt::Write;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use bpqm_core::capacity::{builtin_links, LinkSpec};
use bpqm_core::receiver::Mode;
use bpqm_core::simulator::NoiseModel;

pub const DEFAULT_SEED: u64 = 0xC0DE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeKind {
    Exact,
    Noisy,
    Sampled,
}

impl ModeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Noisy => "noisy",
            Self::Sampled => "sampled",
        }
    }
}

impl FromStr for ModeKind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "noisy" => Ok(Self::Noisy),
            "sampled" => Ok(Self::Sampled),
            _ => bail!("unknown mode `{s}` (expected exact, noisy or sampled)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub log: bool,
}

impl Default for Grid {
    fn default() -> Self {
        Self { min: 1e-3, max: 1.0, points: 30, log: true }
    }
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            bail!("grid needs finite n_min < n_max, got {} and {}", self.min, self.max);
        }
        if self.points < 2 {
            bail!("grid needs at least 2 points, got {}", self.points);
        }
        if self.min <= 0.0 {
            bail!("grid values must be positive, got n_min = {}", self.min);
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == self.points - 1 {
                    return self.max;
                }
                let t = i as f64 / last;
                if self.log {
                    self.min * (self.max / self.min).powf(t)
                } else {
                    self.min + (self.max - self.min) * t
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub grid: Grid,
    pub mode: ModeKind,
    pub p1: f64,
    pub p2: f64,
    pub prep_fail: f64,
    pub shots: u64,
    pub seed: u64,
    pub links: Vec<LinkSpec>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            grid: Grid::default(),
            mode: ModeKind::Exact,
            p1: 1e-4,
            p2: 5e-3,
            prep_fail: NoiseModel::DEFAULT_PREP_FAIL,
            shots: 1000,
            seed: DEFAULT_SEED,
            links: builtin_links(),
        }
    }
}

pub fn parse_seed(s: &str) -> Result<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).map_err(|e| anyhow!("bad seed `{s}`: {e}")),
        None => s.parse().map_err(|e| anyhow!("bad seed `{s}`: {e}")),
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| anyhow!("bad value for `{key}`: {e}"))
}

#[derive(Default)]
struct PartialLink {
    name: String,
    fields: [Option<f64>; 6],
}

const LINK_KEYS: [&str; 6] = ["wavelength", "tx_diameter", "rx_diameter", "distance", "power", "pulse_width"];

impl PartialLink {
    fn finish(self) -> Result<LinkSpec> {
        let mut v = [0.0; 6];
        for (i, f) in self.fields.iter().enumerate() {
            v[i] = f.ok_or_else(|| anyhow!("link `{}` is missing `{}`", self.name, LINK_KEYS[i]))?;
        }
        let spec = LinkSpec {
            name: self.name,
            wavelength: v[0],
            tx_diameter: v[1],
            rx_diameter: v[2],
            distance: v[3],
            power: v[4],
            pulse_width: v[5],
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        NoiseModel::new(self.p1, self.p2, self.prep_fail)?;
        if self.shots == 0 {
            bail!("shots must be at least 1");
        }
        for link in &self.links {
            link.validate()?;
        }
        Ok(())
    }

    pub fn noise(&self) -> NoiseModel {
        NoiseModel::new(self.p1, self.p2, self.prep_fail).expect("validated configuration")
    }

    /// Engine settings for grid point `index`; sampled runs use `seed + index`.
    pub fn mode_for_point(&self, index: usize) -> Mode {
        match self.mode {
            ModeKind::Exact => Mode::Exact,
            ModeKind::Noisy => Mode::Noisy(self.noise()),
            ModeKind::Sampled => Mode::Sampled {
                shots: self.shots,
                seed: self.seed.wrapping_add(index as u64),
                noise: Some(self.noise()).filter(|n| *n != NoiseModel::noiseless()),
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut section = String::new();
        let mut links: Vec<PartialLink> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                if let Some(link) = section.strip_prefix("link ") {
                    links.push(PartialLink { name: link.trim().to_string(), ..Default::default() });
                } else if !["grid", "run", "noise"].contains(&section.as_str()) {
                    bail!("line {line_no}: unknown section [{section}]");
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| anyhow!("line {line_no}: expected `key = value`"))?;
            cfg.apply(&section, key, value, &mut links)
                .with_context(|| format!("line {line_no}"))?;
        }
        if !links.is_empty() {
            cfg.links = links.into_iter().map(PartialLink::finish).collect::<Result<_>>()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, section: &str, key: &str, value: &str, links: &mut [PartialLink]) -> Result<()> {
        match (section, key) {
            ("grid", "n_min") => self.grid.min = parse_num(key, value)?,
            ("grid", "n_max") => self.grid.max = parse_num(key, value)?,
            ("grid", "points") => self.grid.points = parse_num(key, value)?,
            ("grid", "log") => self.grid.log = parse_num(key, value)?,
            ("run", "mode") => self.mode = value.parse()?,
            ("run", "shots") => self.shots = parse_num(key, value)?,
            ("run", "seed") => self.seed = parse_seed(value)?,
            ("noise", "p1") => self.p1 = parse_num(key, value)?,
            ("noise", "p2") => self.p2 = parse_num(key, value)?,
            ("noise", "prep_fail") => self.prep_fail = parse_num(key, value)?,
            (s, k) if s.starts_with("link ") => {
                let slot = LINK_KEYS
                    .iter()
                    .position(|&name| name == k)
                    .ok_or_else(|| anyhow!("unknown link key `{k}`"))?;
                let link = links.last_mut().expect("link section opened");
                link.fields[slot] = Some(parse_num(k, value)?);
            }
            (s, k) => bail!("unknown key `{k}` in section [{s}]"),
        }
        Ok(())
    }

    /// Text that [`SweepConfig::parse`] reads back to an identical value.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let g = &self.grid;
        writeln!(out, "[grid]\nn_min = {}\nn_max = {}\npoints = {}\nlog = {}\n", g.min, g.max, g.points, g.log).unwrap();
        writeln!(out, "[run]\nmode = {}\nshots = {}\nseed = {}\n", self.mode.as_str(), self.shots, self.seed).unwrap();
        writeln!(out, "[noise]\np1 = {}\np2 = {}\nprep_fail = {}", self.p1, self.p2, self.prep_fail).unwrap();
        for l in &self.links {
            let values = [l.wavelength, l.tx_diameter, l.rx_diameter, l.distance, l.power, l.pulse_width];
            writeln!(out, "\n[link {}]", l.name).unwrap();
            for (k, v) in LINK_KEYS.iter().zip(values) {
                writeln!(out, "{k} = {v}").unwrap();
            }
        }
        out
    }
}
