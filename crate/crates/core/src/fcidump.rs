//! FCIDUMP ingestion and spin-orbital expansion.
//!
//! Spatial integrals follow the chemist convention `(pq|rs)`. The spin-orbital
//! tensor `g[i][j][k][l]` multiplies `a_i† a_j† a_k a_l` with a prefactor of ½,
//! which gives `g_ijkl = (il|jk)` with spin deltas on the `(i,l)` and `(j,k)`
//! pairs.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance when the same integral appears more than once.
pub const DUPLICATE_TOL: f64 = 1e-10;
/// Tolerance for symmetry checks on integral tensors.
pub const SYMMETRY_TOL: f64 = 1e-12;

fn pair_index(p: usize, q: usize) -> usize {
    let (a, b) = if p >= q { (p, q) } else { (q, p) };
    a * (a + 1) / 2 + b
}

/// Integrals over spatial orbitals, as stored in an FCIDUMP file.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialIntegrals {
    pub n_orb: usize,
    pub n_elec: usize,
    pub ms2: i64,
    h1: Vec<f64>,
    eri: Vec<f64>,
    pub e_core: f64,
}

impl SpatialIntegrals {
    /// All-zero integrals for `n_orb` orbitals.
    pub fn zeros(n_orb: usize, n_elec: usize, ms2: i64) -> Self {
        let npair = n_orb * (n_orb + 1) / 2;
        Self { n_orb, n_elec, ms2, h1: vec![0.0; n_orb * n_orb], eri: vec![0.0; npair * (npair + 1) / 2], e_core: 0.0 }
    }

    pub fn h1(&self, p: usize, q: usize) -> f64 {
        self.h1[p * self.n_orb + q]
    }

    pub fn set_h1(&mut self, p: usize, q: usize, value: f64) {
        self.h1[p * self.n_orb + q] = value;
        self.h1[q * self.n_orb + p] = value;
    }

    /// Chemist-notation `(pq|rs)`.
    pub fn eri(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.eri[pair_index(pair_index(p, q), pair_index(r, s))]
    }

    /// Sets `(pq|rs)` and its seven symmetry partners.
    pub fn set_eri(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        let idx = pair_index(pair_index(p, q), pair_index(r, s));
        self.eri[idx] = value;
    }
}

/// Integrals over spin orbitals in blocked ordering (α block, then β block).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOrbitalIntegrals {
    pub n_so: usize,
    h: Vec<f64>,
    g: Vec<f64>,
    pub e_core: f64,
}

impl SpinOrbitalIntegrals {
    /// Builds from dense tensors; `h` is `n_so²` row-major and `g` is `n_so⁴`.
    pub fn from_dense(n_so: usize, h: Vec<f64>, g: Vec<f64>, e_core: f64) -> Result<Self> {
        if h.len() != n_so * n_so || g.len() != n_so.pow(4) {
            return Err(Error::Consistency(format!(
                "tensor sizes {} / {} do not match n_so = {n_so}",
                h.len(),
                g.len()
            )));
        }
        let ints = Self { n_so, h, g, e_core };
        ints.check_symmetry()?;
        Ok(ints)
    }

    pub fn h(&self, i: usize, j: usize) -> f64 {
        self.h[i * self.n_so + j]
    }

    pub fn g(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n_so;
        self.g[((i * n + j) * n + k) * n + l]
    }

    pub fn n_orb(&self) -> usize {
        self.n_so / 2
    }

    fn check_symmetry(&self) -> Result<()> {
        let n = self.n_so;
        for i in 0..n {
            for j in 0..n {
                if (self.h(i, j) - self.h(j, i)).abs() > SYMMETRY_TOL {
                    return Err(Error::Consistency(format!("h not Hermitian at ({i},{j})")));
                }
                for k in 0..n {
                    for l in 0..n {
                        if (self.g(i, j, k, l) - self.g(j, i, l, k)).abs() > SYMMETRY_TOL {
                            return Err(Error::Consistency(format!("g_ijkl != g_jilk at ({i},{j},{k},{l})")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Contents of a fixture's `meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureMetadata {
    pub name: String,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub e_core: f64,
    /// Total HF energy (electronic plus `e_core`).
    pub e_hf: f64,
    /// Total FCI or CASCI energy (electronic plus `e_core`).
    pub e_fci: f64,
    pub basis: String,
    pub geometry: String,
    /// Spin multiplicity of the reference state when it is not simply the
    /// lowest state of the particle-number sector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<u32>,
}

impl FixtureMetadata {
    pub fn validate(&self, n_so: usize) -> Result<()> {
        if self.e_fci > self.e_hf + DUPLICATE_TOL {
            return Err(Error::Consistency(format!("e_fci ({}) above e_hf ({})", self.e_fci, self.e_hf)));
        }
        if self.n_alpha + self.n_beta > n_so {
            return Err(Error::Consistency(format!(
                "{} electrons do not fit {n_so} spin orbitals",
                self.n_alpha + self.n_beta
            )));
        }
        Ok(())
    }

    /// Target `S(S+1)` for the reference state, if the metadata pins one.
    pub fn target_s2(&self) -> Option<f64> {
        self.multiplicity.map(|m| {
            let s = (f64::from(m) - 1.0) / 2.0;
            s * (s + 1.0)
        })
    }
}

struct Header {
    norb: usize,
    nelec: usize,
    ms2: i64,
    body_start: usize,
}

fn parse_header(lines: &[&str]) -> Result<Header> {
    let first =
        lines.iter().position(|l| !l.trim().is_empty()).ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let head = lines[first].trim_start();
    if !head.to_ascii_uppercase().starts_with("&FCI") {
        return Err(Error::Parse { line: first + 1, msg: "expected &FCI namelist".into() });
    }

    let mut text = String::new();
    let mut end = None;
    for (n, raw) in lines.iter().enumerate().skip(first) {
        let upper = raw.to_ascii_uppercase();
        if let Some(pos) = upper.find("&END").or_else(|| upper.trim_end().strip_suffix('/').map(|s| s.len())) {
            text.push_str(&upper[..pos]);
            end = Some(n);
            break;
        }
        text.push_str(&upper);
        text.push(',');
    }
    let end = end.ok_or(Error::Parse { line: first + 1, msg: "unterminated namelist".into() })?;
    let text = text.trim_start().trim_start_matches("&FCI");

    let mut values: HashMap<String, Vec<String>> = HashMap::new();
    let mut current: Option<String> = None;
    for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((key, value)) = token.split_once('=') {
            let key = key.trim().to_string();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Parse { line: first + 1, msg: format!("bad namelist key `{key}`") });
            }
            let entry = values.entry(key.clone()).or_default();
            let value = value.trim();
            if !value.is_empty() {
                entry.push(value.to_string());
            }
            current = Some(key);
        } else if let Some(key) = &current {
            values.get_mut(key).expect("key inserted").push(token.to_string());
        } else {
            return Err(Error::Parse { line: first + 1, msg: format!("stray namelist token `{token}`") });
        }
    }

    let scalar = |key: &str| -> Result<Option<i64>> {
        match values.get(key).and_then(|v| v.first()) {
            None => Ok(None),
            Some(v) => v
                .parse::<i64>()
                .map(Some)
                .map_err(|_| Error::Parse { line: first + 1, msg: format!("{key} is not an integer: `{v}`") }),
        }
    };
    let missing = |key: &str| Error::Parse { line: first + 1, msg: format!("namelist lacks {key}") };
    let norb = scalar("NORB")?.ok_or_else(|| missing("NORB"))?;
    let nelec = scalar("NELEC")?.ok_or_else(|| missing("NELEC"))?;
    let ms2 = scalar("MS2")?.unwrap_or(0);
    if norb < 0 || nelec < 0 {
        return Err(Error::Parse { line: first + 1, msg: "negative NORB or NELEC".into() });
    }
    Ok(Header { norb: norb as usize, nelec: nelec as usize, ms2, body_start: end + 1 })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    Core,
    One(usize, usize),
    Two(usize, usize),
}

/// Parses FCIDUMP text.
pub fn parse_fcidump(text: &str) -> Result<SpatialIntegrals> {
    let lines: Vec<&str> = text.lines().collect();
    let header = parse_header(&lines)?;
    let norb = header.norb;
    let mut out = SpatialIntegrals::zeros(norb, header.nelec, header.ms2);
    let mut seen: HashMap<Slot, f64> = HashMap::new();

    for (n, raw) in lines.iter().enumerate().skip(header.body_start) {
        let line = n + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 5 {
            return Err(Error::Parse { line, msg: format!("expected 5 fields, found {}", fields.len()) });
        }
        let value: f64 = fields[0]
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|_| Error::Parse { line, msg: format!("bad value `{}`", fields[0]) })?;
        let mut idx = [0usize; 4];
        for (slot, field) in idx.iter_mut().zip(&fields[1..]) {
            let v: i64 = field.parse().map_err(|_| Error::Parse { line, msg: format!("bad index `{field}`") })?;
            if v < 0 || v as usize > norb {
                return Err(Error::Index { line, index: v.max(0) as usize, norb });
            }
            *slot = v as usize;
        }
        let [i, j, k, l] = idx;
        let slot = match (i, j, k, l) {
            (0, 0, 0, 0) => Slot::Core,
            (_, _, 0, 0) if i > 0 && j > 0 => Slot::One(pair_index(i - 1, j - 1), 0),
            _ if i > 0 && j > 0 && k > 0 && l > 0 => Slot::Two(pair_index(i - 1, j - 1), pair_index(k - 1, l - 1)),
            _ => {
                let bad = *idx.iter().find(|&&v| v == 0).unwrap_or(&0);
                return Err(Error::Index { line, index: bad, norb });
            }
        };
        let slot = match slot {
            Slot::Two(a, b) if a < b => Slot::Two(b, a),
            s => s,
        };
        if let Some(prev) = seen.insert(slot, value) {
            if (prev - value).abs() > DUPLICATE_TOL {
                return Err(Error::Consistency(format!(
                    "line {line}: conflicting duplicate entry ({prev} vs {value})"
                )));
            }
        }
        match slot {
            Slot::Core => out.e_core = value,
            Slot::One(..) => out.set_h1(i - 1, j - 1, value),
            Slot::Two(..) => out.set_eri(i - 1, j - 1, k - 1, l - 1, value),
        }
    }
    Ok(out)
}

/// Canonical FCIDUMP text: unique two-body entries, then one-body, then the
/// core energy, each value with 17 significant digits.
pub fn write_fcidump(si: &SpatialIntegrals) -> String {
    let n = si.n_orb;
    let mut out = format!("&FCI NORB={},NELEC={},MS2={},&END\n", n, si.n_elec, si.ms2);
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if pair_index(i, j) < pair_index(k, l) {
                        continue;
                    }
                    let v = si.eri(i, j, k, l);
                    if v != 0.0 {
                        writeln!(out, "{v:.16e} {} {} {} {}", i + 1, j + 1, k + 1, l + 1).unwrap();
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = si.h1(i, j);
            if v != 0.0 {
                writeln!(out, "{v:.16e} {} {} 0 0", i + 1, j + 1).unwrap();
            }
        }
    }
    writeln!(out, "{:.16e} 0 0 0 0", si.e_core).unwrap();
    out
}

/// Expands spatial integrals to spin orbitals in blocked ordering.
pub fn spatial_to_spin(si: &SpatialIntegrals) -> SpinOrbitalIntegrals {
    let n_orb = si.n_orb;
    let n = 2 * n_orb;
    let spin = |p: usize| p / n_orb;
    let spatial = |p: usize| p % n_orb;

    let mut h = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if spin(i) == spin(j) {
                h[i * n + j] = si.h1(spatial(i), spatial(j));
            }
        }
    }
    let mut g = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if spin(j) != spin(k) {
                    continue;
                }
                for l in 0..n {
                    if spin(i) != spin(l) {
                        continue;
                    }
                    g[((i * n + j) * n + k) * n + l] = si.eri(spatial(i), spatial(l), spatial(j), spatial(k));
                }
            }
        }
    }
    SpinOrbitalIntegrals { n_so: n, h, g, e_core: si.e_core }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Loads `FCIDUMP` and `meta.json` from a fixture directory.
pub fn load_fixture(dir: impl AsRef<Path>) -> Result<(SpinOrbitalIntegrals, FixtureMetadata)> {
    let dir = dir.as_ref();
    let spatial = parse_fcidump(&read(&dir.join("FCIDUMP"))?)?;
    let meta: FixtureMetadata = serde_json::from_str(&read(&dir.join("meta.json"))?)?;
    let spin = spatial_to_spin(&spatial);
    meta.validate(spin.n_so)?;
    if meta.n_alpha + meta.n_beta != spatial.n_elec {
        return Err(Error::Consistency(format!(
            "meta.json has {} electrons, FCIDUMP NELEC={}",
            meta.n_alpha + meta.n_beta,
            spatial.n_elec
        )));
    }
    if (meta.e_core - spatial.e_core).abs() > DUPLICATE_TOL {
        return Err(Error::Consistency(format!(
            "meta.json e_core {} differs from FCIDUMP {}",
            meta.e_core, spatial.e_core
        )));
    }
    Ok((spin, meta))
}
