//! System specification files and the full single-system analysis report.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::counting::{certify, CountReport};
use crate::displacement::{find_cycles_with, CycleRecord, CycleScan, ScanConfig};
use crate::halfmap::{eval_y_l, eval_y_rb, HalfMapSample};
use crate::lienard::{to_canonical, CanonicalPWL, GeneralPWL};
use crate::{Error, Result};

/// Contents of a system specification file, in TOML or JSON.
///
/// ```toml
/// [canonical]
/// T_L = -0.44
/// D_L = 1.0
/// a_L = -0.33
/// T_R = 0.47
/// D_R = 1.0
/// a_R = -0.9
/// b = 0.41
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SystemSpec {
    General(GeneralPWL),
    Canonical(CanonicalPWL),
}

/// Serialization format of a specification file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecFormat {
    Toml,
    Json,
}

impl SystemSpec {
    pub fn parse(text: &str, format: SpecFormat) -> Result<Self> {
        let spec: SystemSpec = match format {
            SpecFormat::Json => serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("JSON: {e}")))?,
            SpecFormat::Toml => toml::from_str(text).map_err(|e| Error::InvalidInput(format!("TOML: {e}")))?,
        };
        let finite = match &spec {
            SystemSpec::General(g) => g.is_finite(),
            SystemSpec::Canonical(c) => c.is_finite(),
        };
        if !finite {
            return Err(Error::InvalidInput("system has non-finite entries".into()));
        }
        Ok(spec)
    }

    /// Parses by file extension (`.toml` or `.json`); otherwise by content.
    pub fn parse_auto(text: &str, path: Option<&Path>) -> Result<Self> {
        match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("json") => SystemSpec::parse(text, SpecFormat::Json),
            Some("toml") => SystemSpec::parse(text, SpecFormat::Toml),
            _ if text.trim_start().starts_with('{') => SystemSpec::parse(text, SpecFormat::Json),
            _ => SystemSpec::parse(text, SpecFormat::Toml),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        SystemSpec::parse_auto(&text, Some(path))
    }

    /// Canonical parameters; canonical input is returned unchanged.
    pub fn canonical(&self) -> Result<CanonicalPWL> {
        match self {
            SystemSpec::General(g) => to_canonical(g),
            SystemSpec::Canonical(c) => Ok(*c),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("specs always serialize")
    }
}

/// Samples of both half-maps on an even grid of `int(I_b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfMapTables {
    pub left: Vec<HalfMapSample>,
    pub right_shifted: Vec<HalfMapSample>,
}

impl HalfMapTables {
    pub const CSV_HEADER: &'static str = "map,y0,y1,flight_time,residual";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for (name, rows) in [("y_L", &self.left), ("y_R^b", &self.right_shifted)] {
            for s in rows {
                out.push_str(name);
                out.push(',');
                out.push_str(&s.csv_row());
                out.push('\n');
            }
        }
        out
    }
}

/// Everything known about one system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: SystemSpec,
    pub canonical: CanonicalPWL,
    pub config: ScanConfig,
    pub continuum: bool,
    pub cycles: Vec<CycleRecord>,
    pub scan: CycleScan,
    pub count: CountReport,
    pub halfmaps: HalfMapTables,
    pub warnings: Vec<String>,
}

/// Number of rows in each half-map table.
pub const TABLE_ROWS: usize = 64;
/// Unbounded domains are tabulated up to this ordinate.
const TABLE_SPAN: f64 = 20.0;

pub fn halfmap_tables(c: &CanonicalPWL, cfg: &ScanConfig, scan: &CycleScan) -> HalfMapTables {
    let mut t = HalfMapTables {
        left: Vec::new(),
        right_shifted: Vec::new(),
    };
    let Some(iv) = scan.interval else {
        return t;
    };
    let hi = if iv.bounded { iv.hi } else { iv.hi.min(iv.lo + TABLE_SPAN) };
    for i in 1..=TABLE_ROWS {
        let y0 = iv.lo + (hi - iv.lo) * i as f64 / (TABLE_ROWS + 1) as f64;
        if let Ok(s) = eval_y_l(c, y0, &cfg.halfmap) {
            t.left.push(s);
        }
        if let Ok(s) = eval_y_rb(c, y0, &cfg.halfmap) {
            t.right_shifted.push(s);
        }
    }
    t
}

/// Canonicalizes, scans for cycles, certifies the count and tabulates the half-maps.
pub fn analyze(input: &SystemSpec, cfg: &ScanConfig) -> Result<AnalysisReport> {
    let canonical = input.canonical()?;
    let scan = find_cycles_with(&canonical, cfg);
    let count = certify(&canonical, &scan, cfg);
    let halfmaps = halfmap_tables(&canonical, cfg, &scan);
    let mut warnings = scan.warnings.clone();
    if scan.interval.is_none() {
        warnings.push("the half-map domain I_b has empty interior; no crossing orbits".into());
    }
    if !scan.boundary_suspects.is_empty() {
        warnings.push(format!(
            "{} zero(s) of δ_b at the boundary of I_b were not counted as cycles",
            scan.boundary_suspects.len()
        ));
    }
    Ok(AnalysisReport {
        input: *input,
        canonical,
        config: *cfg,
        continuum: scan.continuum,
        cycles: scan.cycles.clone(),
        scan,
        count,
        halfmaps,
        warnings,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("report JSON: {e}")))
    }

    /// Cycle table followed by `#`-prefixed summary lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CycleRecord::CSV_HEADER);
        out.push('\n');
        for cy in &self.cycles {
            out.push_str(&cy.csv_row());
            out.push('\n');
        }
        let r = &self.count;
        out.push_str(&format!(
            "# continuum={} certified={} violation={} k={} N={} intersection_bound={} observed_intersections={} observed_cycles={}\n",
            self.continuum,
            r.certified,
            r.violation,
            r.k_contacts,
            r.n_branches,
            r.intersection_bound,
            r.observed_intersections,
            r.observed_cycles
        ));
        for w in &self.warnings {
            out.push_str(&format!("# warning: {w}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_and_general_files_parse() {
        let toml = "[canonical]\nT_L = 0.0\nD_L = 1.0\na_L = 0.0\nT_R = 0.0\nD_R = 1.0\na_R = 0.0\nb = 0.0\n";
        let s = SystemSpec::parse(toml, SpecFormat::Toml).unwrap();
        assert_eq!(s.canonical().unwrap(), CanonicalPWL::new(0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0));

        let json = r#"{"general": {"A_L": [[1, 1], [0, 1]], "A_R": [[0, 1], [-1, 0]], "b_L": [0, 0], "b_R": [0, 0]}}"#;
        let s = SystemSpec::parse_auto(json, None).unwrap();
        assert_eq!(s.canonical().unwrap().to_array(), [2.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(SystemSpec::parse_auto(&s.to_toml(), None).unwrap(), s);
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(SystemSpec::parse("[canonical]\nT_L = 1.0\n", SpecFormat::Toml).is_err());
        assert!(SystemSpec::parse("{\"polar\": {}}", SpecFormat::Json).is_err());
        assert!(SystemSpec::parse("not a spec", SpecFormat::Toml).is_err());
    }

    #[test]
    fn report_round_trips_through_json() {
        let spec = SystemSpec::Canonical(CanonicalPWL::new(-0.5, 1.0, 1.0, 0.2, 1.0, 1.0, 0.0));
        let r = analyze(&spec, &ScanConfig::default()).unwrap();
        assert_eq!(r.cycles.len(), 1);
        assert!(!r.halfmaps.left.is_empty());
        assert_eq!(AnalysisReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn global_center_reports_continuum() {
        let spec = SystemSpec::Canonical(CanonicalPWL::new(0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0));
        let r = analyze(&spec, &ScanConfig::default()).unwrap();
        assert!(r.continuum && r.count.certified && r.cycles.is_empty());
    }
}
