//! Line-oriented text fixtures, the Wigner CSV format and JSON run reports.
//!
//! Text files start with `key=value` header lines followed by data lines.
//! Blank lines and lines starting with `#` are ignored everywhere. Floats
//! are written in Rust's shortest round-trip form, so every writer's output
//! reads back to the identical values.

use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::domain::{DomainDescriptor, PhaseDomain, Sign};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::program::{Coefficients, OperatorForm, OperatorSpec, ProgramState, ProgramTerm};
use crate::scattering::Mode;
use crate::state::{QuditState, StateKind};
use crate::tolerance::Tolerances;
use crate::wigner::WignerGrid;

struct TextFile<'a> {
    header: Vec<(usize, &'a str, &'a str)>,
    body: Vec<(usize, &'a str)>,
}

fn is_key(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_lowercase() || b == b'_')
}

fn split_text(text: &str) -> Result<TextFile<'_>> {
    let mut header = Vec::new();
    let mut body = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        match line.split_once('=') {
            Some((key, value)) if is_key(key.trim()) => {
                if !body.is_empty() {
                    return Err(Error::parse(
                        lineno,
                        format!("header field `{}` after data lines", key.trim()),
                    ));
                }
                if header.iter().any(|(_, k, _)| *k == key.trim()) {
                    return Err(Error::parse(lineno, format!("field `{}` given twice", key.trim())));
                }
                header.push((lineno, key.trim(), value.trim()));
            }
            _ => body.push((lineno, line)),
        }
    }
    Ok(TextFile { header, body })
}

impl<'a> TextFile<'a> {
    fn field(&self, key: &str) -> Result<(usize, &'a str)> {
        self.header
            .iter()
            .find(|(_, k, _)| *k == key)
            .map(|&(l, _, v)| (l, v))
            .ok_or_else(|| Error::parse(0, format!("missing field `{key}`")))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let (line, v) = self.field(key)?;
        v.parse()
            .map_err(|_| Error::parse(line, format!("field `{key}` has invalid value {v:?}")))
    }

    fn dim(&self) -> Result<usize> {
        let n: usize = self.parsed("dim")?;
        if n == 0 {
            return Err(Error::parse(self.field("dim")?.0, "field `dim` must be at least 1"));
        }
        Ok(n)
    }

    fn only_fields(&self, allowed: &[&str]) -> Result<()> {
        match self.header.iter().find(|(_, k, _)| !allowed.contains(k)) {
            Some(&(line, key, _)) => Err(Error::parse(line, format!("unknown field `{key}`"))),
            None => Ok(()),
        }
    }
}

fn parse_f64(line: usize, what: &str, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::parse(line, format!("{what} {s:?} is not a finite number")))
}

fn parse_usize(line: usize, what: &str, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("{what} {s:?} is not a nonnegative integer")))
}

fn parse_complex(line: usize, token: &str) -> Result<C64> {
    let (re, im) = token
        .split_once(',')
        .ok_or_else(|| Error::parse(line, format!("expected re,im but found {token:?}")))?;
    Ok(C64::new(
        parse_f64(line, "real part", re.trim())?,
        parse_f64(line, "imaginary part", im.trim())?,
    ))
}

fn complex_row(line: usize, text: &str) -> Result<Vec<C64>> {
    text.split_whitespace().map(|t| parse_complex(line, t)).collect()
}

fn format_complex(z: C64) -> String {
    format!("{},{}", z.re, z.im)
}

fn parse_matrix(n: usize, body: &[(usize, &str)]) -> Result<ComplexMatrix> {
    if body.len() != n {
        let line = body.get(n).map_or(0, |b| b.0);
        return Err(Error::parse(
            line,
            format!("expected {n} matrix rows, found {}", body.len()),
        ));
    }
    let mut data = Vec::with_capacity(n * n);
    for &(line, text) in body {
        let row = complex_row(line, text)?;
        if row.len() != n {
            return Err(Error::parse(
                line,
                format!("expected {n} entries in row, found {}", row.len()),
            ));
        }
        data.extend(row);
    }
    ComplexMatrix::new(n, n, data)
}

fn write_matrix(out: &mut String, m: &ComplexMatrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&z| format_complex(z)).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
}

fn with_location<T>(r: Result<T>, path: &Path) -> Result<T> {
    r.map_err(|e| e.with_path(path.display().to_string()))
}

/// `dim`, `kind=pure|mixed`, then `N` amplitudes or `N` rows of `N` entries.
pub fn parse_state(text: &str, tol: &Tolerances) -> Result<QuditState> {
    let f = split_text(text)?;
    f.only_fields(&["dim", "kind"])?;
    let n = f.dim()?;
    let (kind_line, kind) = f.field("kind")?;
    let invalid = |e: Error| Error::parse(kind_line, e.to_string());
    match kind {
        "pure" => {
            let mut amps = Vec::with_capacity(n);
            for &(line, text) in &f.body {
                amps.extend(complex_row(line, text)?);
            }
            if amps.len() != n {
                return Err(Error::parse(
                    0,
                    format!("expected {n} amplitudes, found {}", amps.len()),
                ));
            }
            QuditState::pure(amps, tol).map_err(invalid)
        }
        "mixed" => QuditState::mixed(parse_matrix(n, &f.body)?, tol).map_err(invalid),
        other => Err(Error::parse(
            kind_line,
            format!("kind must be pure or mixed, got {other:?}"),
        )),
    }
}

pub fn format_state(state: &QuditState) -> String {
    let mut out = format!("dim={}\n", state.dim());
    match state.kind() {
        StateKind::Pure(amps) => {
            out.push_str("kind=pure\n");
            for &a in amps {
                writeln!(out, "{}", format_complex(a)).unwrap();
            }
        }
        StateKind::Mixed(m) => {
            out.push_str("kind=mixed\n");
            write_matrix(&mut out, m);
        }
    }
    out
}

/// `dim`, `form=matrix` with `N` rows, or `form=coeffs` with `q p re im`
/// lines over the fundamental cell (absent points are zero).
pub fn parse_operator(text: &str) -> Result<OperatorSpec> {
    let f = split_text(text)?;
    f.only_fields(&["dim", "form"])?;
    let n = f.dim()?;
    let (form_line, form) = f.field("form")?;
    match form {
        "matrix" => OperatorSpec::matrix(parse_matrix(n, &f.body)?),
        "coeffs" => {
            let mut entries = Vec::with_capacity(f.body.len());
            let mut seen = std::collections::BTreeSet::new();
            for &(line, text) in &f.body {
                let t: Vec<&str> = text.split_whitespace().collect();
                if t.len() != 4 {
                    return Err(Error::parse(
                        line,
                        format!("expected `q p re im`, found {} fields", t.len()),
                    ));
                }
                let (q, p) = (parse_usize(line, "q", t[0])?, parse_usize(line, "p", t[1])?);
                if q >= n || p >= n {
                    return Err(Error::parse(line, format!("point ({q}, {p}) outside [0, {n})")));
                }
                if !seen.insert((q, p)) {
                    return Err(Error::parse(line, format!("point ({q}, {p}) given twice")));
                }
                let v = C64::new(parse_f64(line, "re", t[2])?, parse_f64(line, "im", t[3])?);
                entries.push(((q, p), v));
            }
            Ok(OperatorSpec::coefficients(Coefficients::from_entries(n, entries)?))
        }
        other => Err(Error::parse(
            form_line,
            format!("form must be matrix or coeffs, got {other:?}"),
        )),
    }
}

/// Coefficient files list every fundamental-cell point, zeros included.
pub fn format_operator(o: &OperatorSpec) -> String {
    let mut out = format!("dim={}\n", o.dim());
    match o.form() {
        OperatorForm::Matrix(m) => {
            out.push_str("form=matrix\n");
            write_matrix(&mut out, m);
        }
        OperatorForm::Coefficients(c) => {
            out.push_str("form=coeffs\n");
            for ((q, p), v) in c.iter() {
                writeln!(out, "{q} {p} {} {}", v.re, v.im).unwrap();
            }
        }
    }
    out
}

/// `dim`, `descriptor`, then `q p sign` lines. Without point lines a
/// non-custom descriptor is expanded; with them, the point set must match
/// the descriptor's (signs are free).
pub fn parse_domain(text: &str) -> Result<PhaseDomain> {
    let f = split_text(text)?;
    f.only_fields(&["dim", "descriptor"])?;
    let n = f.dim()?;
    let (dline, dtext) = f.field("descriptor")?;
    let descriptor: DomainDescriptor = dtext.parse().map_err(|e: String| Error::parse(dline, e))?;
    if f.body.is_empty() {
        if descriptor == DomainDescriptor::Custom {
            return Err(Error::parse(0, "custom domain has no `q p sign` lines"));
        }
        return PhaseDomain::from_descriptor(n, descriptor).map_err(|e| Error::parse(dline, e.to_string()));
    }
    let mut points = Vec::with_capacity(f.body.len());
    for &(line, text) in &f.body {
        let t: Vec<&str> = text.split_whitespace().collect();
        if t.len() != 3 {
            return Err(Error::parse(
                line,
                format!("expected `q p sign`, found {} fields", t.len()),
            ));
        }
        let sign: Sign = t[2].parse().map_err(|e: String| Error::parse(line, e))?;
        points.push((parse_usize(line, "q", t[0])?, parse_usize(line, "p", t[1])?, sign));
    }
    let last = f.body.last().map_or(0, |b| b.0);
    let domain = PhaseDomain::custom(n, points).map_err(|e| Error::parse(last, e.to_string()))?;
    if descriptor != DomainDescriptor::Custom {
        let expected = PhaseDomain::from_descriptor(n, descriptor).map_err(|e| Error::parse(dline, e.to_string()))?;
        let same = expected.len() == domain.len()
            && expected
                .points()
                .iter()
                .zip(domain.points())
                .all(|(a, b)| (a.0, a.1) == (b.0, b.1));
        if !same {
            return Err(Error::parse(
                dline,
                format!("points do not match descriptor `{descriptor}`"),
            ));
        }
    }
    Ok(domain.with_descriptor(descriptor))
}

pub fn format_domain(d: &PhaseDomain) -> String {
    let mut out = format!("dim={}\ndescriptor={}\n", d.n(), d.descriptor());
    for &(q, p, s) in d.points() {
        writeln!(out, "{q} {p} {s}").unwrap();
    }
    out
}

/// `dim`, `register_dim`, `scale`, then `q p amplitude phi` lines.
pub fn parse_program(text: &str) -> Result<ProgramState> {
    let f = split_text(text)?;
    f.only_fields(&["dim", "register_dim", "scale"])?;
    let n = f.dim()?;
    let register_dim: usize = f.parsed("register_dim")?;
    let (sline, stext) = f.field("scale")?;
    let scale = parse_f64(sline, "scale", stext)?;
    let mut terms = Vec::with_capacity(f.body.len());
    for &(line, text) in &f.body {
        let t: Vec<&str> = text.split_whitespace().collect();
        if t.len() != 4 {
            return Err(Error::parse(
                line,
                format!("expected `q p amplitude phi`, found {} fields", t.len()),
            ));
        }
        let sign_bit = match t[3] {
            "0" => false,
            "1" => true,
            other => return Err(Error::parse(line, format!("phi must be 0 or 1, got {other:?}"))),
        };
        terms.push(ProgramTerm {
            q: parse_usize(line, "q", t[0])?,
            p: parse_usize(line, "p", t[1])?,
            amplitude: parse_f64(line, "amplitude", t[2])?,
            sign_bit,
        });
    }
    let tol = Tolerances {
        construction: 1e-9,
        ..Tolerances::DEFAULT
    };
    ProgramState::new(n, register_dim, terms, scale, &tol).map_err(|e| Error::parse(0, e.to_string()))
}

pub fn format_program(ps: &ProgramState) -> String {
    let mut out = format!(
        "dim={}\nregister_dim={}\nscale={}\n# q p amplitude phi\n",
        ps.dim(),
        ps.register_dim(),
        ps.scale()
    );
    for t in ps.terms() {
        writeln!(out, "{} {} {} {}", t.q, t.p, t.amplitude, u8::from(t.sign_bit)).unwrap();
    }
    out
}

pub fn read_state(path: &Path, tol: &Tolerances) -> Result<QuditState> {
    with_location(parse_state(&std::fs::read_to_string(path)?, tol), path)
}

pub fn read_operator(path: &Path) -> Result<OperatorSpec> {
    with_location(parse_operator(&std::fs::read_to_string(path)?), path)
}

pub fn read_domain(path: &Path) -> Result<PhaseDomain> {
    with_location(parse_domain(&std::fs::read_to_string(path)?), path)
}

pub fn read_program(path: &Path) -> Result<ProgramState> {
    with_location(parse_program(&std::fs::read_to_string(path)?), path)
}

pub const WIGNER_CONVENTION: &str = "W(q,p) = Tr(A(q,p) rho) / 2N";

/// Comment header (`N`, convention, ordering), then `q,p,value` rows
/// row-major in `q` over `[0, 2N)²`.
pub fn write_wigner_csv(w: &WignerGrid, out: impl std::io::Write) -> Result<()> {
    let mut out = out;
    writeln!(out, "# N={}", w.n())?;
    writeln!(out, "# convention: {WIGNER_CONVENTION}")?;
    writeln!(out, "# grid: {0}x{0}, row-major in q, q and p in [0, {0})", w.side())?;
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(["q", "p", "value"]).map_err(csv_error)?;
    let side = w.side();
    for q in 0..side {
        for p in 0..side {
            csv.serialize((q, p, w.values()[q * side + p])).map_err(csv_error)?;
        }
    }
    csv.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::parse(line, format!("{other:?}")),
    }
}

pub fn read_wigner_csv(text: &str) -> Result<WignerGrid> {
    let n = text
        .lines()
        .filter_map(|l| l.strip_prefix('#'))
        .find_map(|l| l.trim().strip_prefix("N="))
        .ok_or_else(|| Error::parse(0, "missing `# N=` header"))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| Error::parse(1, format!("bad dimension {n:?}")))?;
    let side = 2 * n;
    let mut values = vec![f64::NAN; side * side];
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    for record in reader.deserialize::<(usize, usize, f64)>() {
        let (q, p, v) = record.map_err(csv_error)?;
        if q >= side || p >= side {
            return Err(Error::IndexOutOfRange { q, p, side });
        }
        values[q * side + p] = v;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::parse(
            0,
            format!("grid is missing points, expected {} rows", side * side),
        ));
    }
    WignerGrid::from_values(n, values)
}

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of_file(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        Ok(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format_version: u32,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub results: serde_json::Value,
    pub duration_ms: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::parse(e.line(), e.to_string()))
    }

    /// Appends one JSON line; existing content is never rewritten.
    pub fn append_to(&self, path: &Path) -> Result<()> {
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        writeln!(f, "{}", self.to_json())?;
        Ok(())
    }
}

pub fn read_reports(path: &Path) -> Result<Vec<RunReport>> {
    std::fs::read_to_string(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            RunReport::from_json(l).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(i + 1, message),
                other => other,
            })
        })
        .collect()
}
