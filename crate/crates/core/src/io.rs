//! CSV and JSON serialization of profiles and results.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::curvatures;
use crate::pendent::PendentFeatures;
use crate::profile::DropProfile;
use crate::report::BoundsReport;
use crate::shooting::ShootingResult;

/// Optional directory for relative output paths.
pub const OUTPUT_DIR_ENV: &str = "DROPS_OUTPUT_DIR";

pub const PROFILE_CSV_HEADER: &str = "r,u,du,v,k_m,k_l";

/// Full double precision: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `r, u, du, v, k_m, k_l` for every stored sample.
pub fn write_profile_csv<W: Write>(profile: &DropProfile, mut w: W) -> Result<()> {
    writeln!(w, "{PROFILE_CSV_HEADER}")?;
    for s in profile.samples() {
        let k = curvatures(profile, s.r)?;
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_f64(s.r),
            fmt_f64(s.u),
            fmt_f64(s.du),
            fmt_f64(s.v),
            fmt_f64(k.meridian),
            fmt_f64(k.latitude)
        )?;
    }
    Ok(())
}

pub fn profile_csv(profile: &DropProfile) -> Result<String> {
    let mut buf = Vec::new();
    write_profile_csv(profile, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

/// A family of profiles in long format with a leading `u0` column.
pub fn family_csv(profiles: &[DropProfile]) -> Result<String> {
    let mut out = format!("u0,{PROFILE_CSV_HEADER}\n");
    for p in profiles {
        let body = profile_csv(p)?;
        for line in body.lines().skip(1) {
            out.push_str(&fmt_f64(p.u0()));
            out.push(',');
            out.push_str(line);
            out.push('\n');
        }
    }
    Ok(out)
}

/// JSON document written by the command line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Document {
    Solution(SolutionDoc),
    Analysis(AnalysisDoc),
    Profile(DropProfile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub mode: String,
    pub solution: ShootingResult,
    pub volume: Option<f64>,
    pub report: Option<BoundsReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisDoc {
    pub features: PendentFeatures,
    pub report: BoundsReport,
    pub profile: DropProfile,
}

impl Document {
    pub fn profile(&self) -> &DropProfile {
        match self {
            Document::Solution(s) => &s.solution.profile,
            Document::Analysis(a) => &a.profile,
            Document::Profile(p) => p,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn read_document(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Resolves a relative output path against [`OUTPUT_DIR_ENV`] when set.
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes `text` to `path` (after [`resolve_output`]), or to stdout.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            let p = resolve_output(p);
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, text)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
