//! Diatomic molecule constants: a small CSV format, unit conversion and the
//! built-in table of six molecules.
//!
//! File format: UTF-8, comma separated, `#` starts a comment line, header row
//! `name,De,De_unit,re_angstrom,mu_amu,source`. `De_unit` is `eV` or `cm-1`
//! (`cm⁻¹` is accepted too). The `source` column may contain commas.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::states::PseudoharmonicParams;

/// Environment variable naming a molecule file that replaces the built-in table.
pub const MOLECULES_ENV: &str = "QCR_MOLECULES";

/// `1 amu = 931.494028 MeV/c²`, in eV.
pub const AMU_IN_EV: f64 = 931.494028e6;
/// `1 cm⁻¹` in eV.
pub const WAVENUMBER_IN_EV: f64 = 1.239841875e-4;
/// `cħ` in eV·Å.
pub const HBAR_C_EV_ANGSTROM: f64 = 1973.29;

pub const HEADER: &str = "name,De,De_unit,re_angstrom,mu_amu,source";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyUnit {
    ElectronVolt,
    Wavenumber,
}

impl EnergyUnit {
    pub fn to_ev(self, value: f64) -> f64 {
        match self {
            EnergyUnit::ElectronVolt => value,
            EnergyUnit::Wavenumber => value * WAVENUMBER_IN_EV,
        }
    }

    pub fn from_ev(self, value: f64) -> f64 {
        match self {
            EnergyUnit::ElectronVolt => value,
            EnergyUnit::Wavenumber => value / WAVENUMBER_IN_EV,
        }
    }
}

impl FromStr for EnergyUnit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "eV" => Ok(EnergyUnit::ElectronVolt),
            "cm-1" | "cm^-1" | "cm⁻¹" => Ok(EnergyUnit::Wavenumber),
            other => Err(format!("unknown energy unit {other:?}; expected eV or cm-1")),
        }
    }
}

impl fmt::Display for EnergyUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnergyUnit::ElectronVolt => "eV",
            EnergyUnit::Wavenumber => "cm-1",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeRecord {
    pub name: String,
    pub de: f64,
    pub de_unit: EnergyUnit,
    pub re_angstrom: f64,
    pub mu_amu: f64,
    pub source: String,
}

impl MoleculeRecord {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.name.trim().is_empty() {
            return Err("empty molecule name".into());
        }
        for (field, v) in [("De", self.de), ("re_angstrom", self.re_angstrom), ("mu_amu", self.mu_amu)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{field} = {v} must be positive"));
            }
        }
        Ok(())
    }

    pub fn de_ev(&self) -> f64 {
        self.de_unit.to_ev(self.de)
    }

    /// Parameters in eV and Å: `mu` carries `μc²` and `hbar` carries `cħ`.
    pub fn to_params(&self) -> Result<PseudoharmonicParams> {
        PseudoharmonicParams::new(self.de_ev(), self.re_angstrom, self.mu_amu * AMU_IN_EV, HBAR_C_EV_ANGSTROM)
    }

    pub fn to_csv_row(&self) -> String {
        format!("{},{},{},{},{},{}", self.name, self.de, self.de_unit, self.re_angstrom, self.mu_amu, self.source)
    }
}

pub fn to_params(rec: &MoleculeRecord) -> Result<PseudoharmonicParams> {
    rec.to_params()
}

fn parse_error(line: usize, detail: impl Into<String>) -> Error {
    Error::Parse { line, detail: detail.into() }
}

fn parse_number(field: &str, name: &str, line: usize) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| parse_error(line, format!("{name}: cannot parse {:?} as a number", field.trim())))
}

/// Parse molecule records from text in the CSV format.
pub fn parse_molecules(text: &str) -> Result<Vec<MoleculeRecord>> {
    let mut records = Vec::new();
    let mut names = HashSet::new();
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !header_seen {
            let cols: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if cols.join(",") != HEADER {
                return Err(parse_error(line, format!("expected header `{HEADER}`")));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = trimmed.splitn(6, ',').collect();
        if fields.len() < 5 {
            return Err(parse_error(line, format!("expected 6 columns, found {}", fields.len())));
        }
        let rec = MoleculeRecord {
            name: fields[0].trim().to_string(),
            de: parse_number(fields[1], "De", line)?,
            de_unit: fields[2].parse().map_err(|e: String| parse_error(line, e))?,
            re_angstrom: parse_number(fields[3], "re_angstrom", line)?,
            mu_amu: parse_number(fields[4], "mu_amu", line)?,
            source: fields.get(5).map_or("", |s| s.trim()).to_string(),
        };
        rec.validate().map_err(|e| parse_error(line, format!("{}: {e}", rec.name)))?;
        if !names.insert(rec.name.clone()) {
            return Err(parse_error(line, format!("duplicate molecule {}", rec.name)));
        }
        records.push(rec);
    }
    if !header_seen {
        return Err(parse_error(0, "missing header row"));
    }
    Ok(records)
}

pub fn load_molecules(path: impl AsRef<Path>) -> Result<Vec<MoleculeRecord>> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_molecules(&text)
}

pub fn write_molecules(records: &[MoleculeRecord]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

const BUILTIN: &str = "\
name,De,De_unit,re_angstrom,mu_amu,source
CO,10.84514471,eV,1.1282,6.860586,Falaye B.J. et al. J. Theor. Comput. Chem. 14 (2015) 1550036
NO,64877,cm-1,1.1508,7.468441,Oyewumi K.J. and Sen K.D. J. Math. Chem. 50 (2012) 1039
N2,96288,cm-1,1.0940,7.00335,Oyewumi K.J. and Sen K.D. J. Math. Chem. 50 (2012) 1039
CH,31838,cm-1,1.1198,0.929931,Oyewumi K.J. and Sen K.D. J. Math. Chem. 50 (2012) 1039
H2,38266,cm-1,0.7416,0.50391,Oyewumi K.J. and Sen K.D. J. Math. Chem. 50 (2012) 1039
ScH,2.25,eV,1.776,0.986040,Ghosh P. and Nath D. Int. J. Quantum Chem. 121 (2021) e26461
";

/// The six shipped molecules: CO, NO, N2, CH, H2, ScH.
pub fn builtin_table() -> Vec<MoleculeRecord> {
    parse_molecules(BUILTIN).expect("built-in table parses")
}

/// The table named by `QCR_MOLECULES` when set, otherwise the built-in one.
pub fn default_table() -> Result<Vec<MoleculeRecord>> {
    match std::env::var_os(MOLECULES_ENV) {
        Some(path) if !path.is_empty() => load_molecules(path),
        _ => Ok(builtin_table()),
    }
}

/// Case-insensitive lookup; `N₂` and `H₂` may also be written with digits.
pub fn find<'a>(table: &'a [MoleculeRecord], name: &str) -> Result<&'a MoleculeRecord> {
    let norm = |s: &str| s.trim().replace('₂', "2").to_ascii_lowercase();
    let key = norm(name);
    table
        .iter()
        .find(|r| norm(&r.name) == key)
        .ok_or_else(|| Error::domain("molecules::find", format!("no molecule named {name:?}")))
}

/// Energy spacings printed for the built-in molecules, in eV.
pub const PRINTED_SPACINGS: [(&str, f64); 6] = [
    ("CO", 0.203796),
    ("NO", 0.164915),
    ("N2", 0.218245),
    ("CH", 0.336462),
    ("H2", 0.756658),
    ("ScH", 0.155542),
];

/// Allowed spacing deviation: looser for the light hydrides.
pub fn spacing_tolerance(name: &str) -> f64 {
    match name {
        "CH" | "H2" => 1e-3,
        _ => 1e-4,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::energy_spacing;
    use approx::assert_relative_eq;

    #[test]
    fn builtin_spacings_match_printed_values() {
        let table = builtin_table();
        assert_eq!(table.len(), 6);
        for (name, printed) in PRINTED_SPACINGS {
            let rec = find(&table, name).unwrap();
            let s = energy_spacing(&rec.to_params().unwrap());
            assert!((s - printed).abs() <= spacing_tolerance(name), "{name}: {s} vs {printed}");
            assert!((s - printed).abs() < 2e-5, "{name}: {s} vs {printed}");
        }
    }

    #[test]
    fn unit_conversions() {
        assert_relative_eq!(EnergyUnit::Wavenumber.to_ev(10000.0), 1.239841875, max_relative = 1e-15);
        let rec = MoleculeRecord {
            name: "X".into(),
            de: 1.0,
            de_unit: EnergyUnit::ElectronVolt,
            re_angstrom: 1.0,
            mu_amu: 1.0,
            source: String::new(),
        };
        assert_eq!(rec.to_params().unwrap().mu, 931.494028e6);
        for v in [1.0, 38266.0, 1e-3] {
            let back = EnergyUnit::Wavenumber.from_ev(EnergyUnit::Wavenumber.to_ev(v));
            assert_relative_eq!(back, v, max_relative = 1e-12);
        }
    }

    #[test]
    fn round_trip_through_text() {
        let table = builtin_table();
        assert_eq!(parse_molecules(&write_molecules(&table)).unwrap(), table);
    }

    #[test]
    fn rejects_bad_rows() {
        let bad_re = format!("{HEADER}\nXY,1.0,eV,-1.0,1.0,test\n");
        match parse_molecules(&bad_re) {
            Err(Error::Parse { line, detail }) => {
                assert_eq!(line, 2);
                assert!(detail.contains("re_angstrom"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad_unit = format!("# comment\n{HEADER}\nXY,1.0,nm,1.0,1.0,test\n");
        assert!(matches!(parse_molecules(&bad_unit), Err(Error::Parse { line: 3, .. })));
        let dup = format!("{HEADER}\nA,1,eV,1,1,s\nA,2,eV,1,1,s\n");
        assert!(matches!(parse_molecules(&dup), Err(Error::Parse { line: 3, .. })));
        assert!(parse_molecules("A,1,eV,1,1,s\n").is_err());
        assert!(parse_molecules(&format!("{HEADER}\nA,x,eV,1,1,s\n")).is_err());
    }

    #[test]
    fn source_may_contain_commas_and_lookup_is_lenient() {
        let t = parse_molecules(&format!("{HEADER}\nN₂,1,cm⁻¹,1,1,a, b, c\n")).unwrap();
        assert_eq!(t[0].source, "a, b, c");
        assert_eq!(t[0].de_unit, EnergyUnit::Wavenumber);
        assert!(find(&t, "n2").is_ok());
        assert!(find(&t, "CO").is_err());
    }
}
