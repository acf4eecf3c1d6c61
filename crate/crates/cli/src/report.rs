//! The JSON report every non-sampling subcommand prints, and the rule that
//! turns its residuals into a verdict.

use std::collections::BTreeMap;
use std::io;

use biharmonic_core::ToleranceConfig;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootStatus {
    Admissible,
    ExcludedMinimal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub label: String,
    pub value: f64,
    /// Largest defect of the equations the root must satisfy.
    pub residual: f64,
    pub status: RootStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiharmonicReport {
    pub schema: u32,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    pub roots: Vec<Root>,
    pub verdict: String,
    /// `λ` of the `λ`-biharmonic equation the residuals test, if any.
    pub lambda: Option<f64>,
    pub tolerances: ToleranceConfig,
    pub warnings: Vec<String>,
    pub annotations: BTreeMap<String, Value>,
}

impl BiharmonicReport {
    pub fn new(command: &str, tolerances: ToleranceConfig) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            inputs: BTreeMap::new(),
            residuals: BTreeMap::new(),
            roots: Vec::new(),
            verdict: String::new(),
            lambda: None,
            tolerances,
            warnings: Vec::new(),
            annotations: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn residual(&mut self, key: &str, value: f64) -> &mut Self {
        self.residuals.insert(key.to_string(), value);
        self
    }

    pub fn annotate(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.annotations.insert(key.to_string(), v);
        self
    }

    /// Sets the verdict from the residuals already recorded.
    pub fn finish(mut self) -> Result<Self, String> {
        self.verdict = derive_verdict(&self)?;
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, Fixed17(PrettyFormatter::new()));
        self.serialize(&mut ser).expect("report serialization cannot fail");
        out.push(b'\n');
        String::from_utf8(out).expect("JSON is UTF-8")
    }
}

fn get(map: &BTreeMap<String, f64>, key: &str) -> Result<f64, String> {
    map.get(key).copied().ok_or_else(|| format!("report lacks residual `{key}`"))
}

pub fn format_lambda(lambda: f64) -> String {
    format!("lambda-biharmonic({lambda})")
}

/// Verdict implied by a report's residuals and tolerances.
///
/// Evaluation reports (those carrying a `tension` residual) compare the
/// bitension and `λ`-residual to `tol.residual · |τ|`; solver reports look
/// at their roots; hypersurface reports use the second fundamental form
/// defect.
pub fn derive_verdict(r: &BiharmonicReport) -> Result<String, String> {
    let tol = &r.tolerances;
    if r.command == "classify helix" && r.annotations.get("class").is_none_or(Value::is_null) {
        return Ok("unclassified".into());
    }
    if r.command == "verify hypersurface" {
        let num = |k: &str| {
            r.inputs
                .get(k)
                .and_then(Value::as_f64)
                .ok_or_else(|| format!("report lacks input `{k}`"))
        };
        let (h2, c) = (num("mean_curvature_sq")?, num("c")?);
        return Ok(if h2 <= tol.minimality {
            "harmonic"
        } else if c <= 0.0 {
            "no-solution"
        } else if get(&r.residuals, "second_ff_defect")? <= tol.residual {
            "proper-biharmonic"
        } else {
            "not-biharmonic"
        }
        .into());
    }
    if r.residuals.contains_key("tension") {
        let t = get(&r.residuals, "tension")?;
        if t <= tol.minimality {
            return Ok("harmonic".into());
        }
        if get(&r.residuals, "bitension")? <= tol.residual * t {
            return Ok("proper-biharmonic".into());
        }
        if let Some(l) = r.lambda {
            if get(&r.residuals, "lambda_residual")? <= tol.residual * t {
                return Ok(format_lambda(l));
            }
        }
        return Ok("not-biharmonic".into());
    }
    let admissible: Vec<&Root> = r.roots.iter().filter(|x| x.status == RootStatus::Admissible).collect();
    if admissible.is_empty() {
        return Ok(if r.roots.iter().any(|x| x.status == RootStatus::ExcludedMinimal) {
            "excluded-minimal"
        } else {
            "no-solution"
        }
        .into());
    }
    if admissible.iter().any(|x| !(x.residual <= tol.residual)) {
        return Ok("not-biharmonic".into());
    }
    Ok(match r.lambda {
        Some(l) => format_lambda(l),
        None => "proper-biharmonic".into(),
    })
}

/// Parses a printed report and checks its verdict against its residuals.
pub fn recheck(json: &str) -> Result<BiharmonicReport, String> {
    let report: BiharmonicReport = serde_json::from_str(json).map_err(|e| format!("unparsable report: {e}"))?;
    if report.schema != SCHEMA_VERSION {
        return Err(format!("unknown schema {}", report.schema));
    }
    if let Some((k, v)) = report.residuals.iter().find(|(_, v)| !(**v >= 0.0)) {
        return Err(format!("residual `{k}` = {v} is not a nonnegative real"));
    }
    let verdict = derive_verdict(&report)?;
    if verdict != report.verdict {
        return Err(format!("verdict `{}` but residuals imply `{verdict}`", report.verdict));
    }
    Ok(report)
}

/// Pretty JSON with every float written to 17 significant digits.
struct Fixed17<'a>(PrettyFormatter<'a>);

impl Formatter for Fixed17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}
