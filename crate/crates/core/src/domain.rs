//! Signed point sets on the `2N × 2N` grid and the programs that make the
//! array return `2N·Σ sign·W(q,p)` over them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::array::run_program;
use crate::catmap::{cat_map_unitary, CatMapSpec};
use crate::error::{Error, Result};
use crate::program::{ProgramState, ProgramTerm};
use crate::state::QuditState;
use crate::tolerance::Tolerances;
use crate::wigner::WignerGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "+" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "-1" => Ok(Sign::Minus),
            other => Err(format!("sign must be + or -, got {other:?}")),
        }
    }
}

/// How a domain was described. Coordinates are grid indices mod `2N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainDescriptor {
    /// `p − b·q ≡ c`
    Line {
        b: usize,
        c: usize,
    },
    /// `q ≡ q0`
    VLine {
        q0: usize,
    },
    /// `p ≡ p0`
    HLine {
        p0: usize,
    },
    /// `(q0 + k, p0 + b·k)` for `k < len`
    Segment {
        q0: usize,
        p0: usize,
        len: usize,
        b: usize,
    },
    /// `(q0 + i, p0 + b·i + j)` for `i < width`, `j < height`
    Parallelogram {
        q0: usize,
        p0: usize,
        width: usize,
        height: usize,
        b: usize,
    },
    Custom,
}

impl fmt::Display for DomainDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DomainDescriptor::Line { b, c } => write!(f, "line b={b} c={c}"),
            DomainDescriptor::VLine { q0 } => write!(f, "vline q0={q0}"),
            DomainDescriptor::HLine { p0 } => write!(f, "hline p0={p0}"),
            DomainDescriptor::Segment { q0, p0, len, b } => {
                write!(f, "segment q0={q0} p0={p0} len={len} b={b}")
            }
            DomainDescriptor::Parallelogram {
                q0,
                p0,
                width,
                height,
                b,
            } => write!(f, "parallelogram q0={q0} p0={p0} width={width} height={height} b={b}"),
            DomainDescriptor::Custom => f.write_str("custom"),
        }
    }
}

impl FromStr for DomainDescriptor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut words = s.split_whitespace();
        let kind = words.next().ok_or("empty descriptor")?;
        let mut fields = BTreeMap::new();
        for w in words {
            let (key, value) = w
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {w:?}"))?;
            let value: usize = value
                .parse()
                .map_err(|_| format!("{key} must be a nonnegative integer, got {value:?}"))?;
            if fields.insert(key, value).is_some() {
                return Err(format!("{key} given twice"));
            }
        }
        let mut take = |key: &str| {
            fields
                .remove(key)
                .ok_or_else(|| format!("{kind} descriptor is missing {key}"))
        };
        let d = match kind {
            "line" => DomainDescriptor::Line {
                b: take("b")?,
                c: take("c")?,
            },
            "vline" => DomainDescriptor::VLine { q0: take("q0")? },
            "hline" => DomainDescriptor::HLine { p0: take("p0")? },
            "segment" => DomainDescriptor::Segment {
                q0: take("q0")?,
                p0: take("p0")?,
                len: take("len")?,
                b: take("b")?,
            },
            "parallelogram" => DomainDescriptor::Parallelogram {
                q0: take("q0")?,
                p0: take("p0")?,
                width: take("width")?,
                height: take("height")?,
                b: take("b")?,
            },
            "custom" => DomainDescriptor::Custom,
            other => return Err(format!("unknown descriptor kind {other:?}")),
        };
        if let Some(key) = fields.keys().next() {
            return Err(format!("unexpected field {key} for {kind}"));
        }
        Ok(d)
    }
}

/// Nonempty set of distinct grid points, each with a sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDomain {
    n: usize,
    points: Vec<(usize, usize, Sign)>,
    descriptor: DomainDescriptor,
}

impl PhaseDomain {
    /// Points must be distinct and inside `[0, 2N)²`.
    pub fn custom(n: usize, points: Vec<(usize, usize, Sign)>) -> Result<Self> {
        Self::build(n, points, DomainDescriptor::Custom)
    }

    fn build(n: usize, mut points: Vec<(usize, usize, Sign)>, descriptor: DomainDescriptor) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidArgument("domain is empty".into()));
        }
        let side = 2 * n;
        points.sort();
        for w in points.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::InvalidArgument(format!(
                    "point ({}, {}) appears twice",
                    w[0].0, w[0].1
                )));
            }
        }
        if let Some(&(q, p, _)) = points.iter().find(|(q, p, _)| *q >= side || *p >= side) {
            return Err(Error::IndexOutOfRange { q, p, side });
        }
        Ok(PhaseDomain { n, points, descriptor })
    }

    /// Expands a descriptor into positive points. `Custom` has no points of
    /// its own and is rejected.
    pub fn from_descriptor(n: usize, d: DomainDescriptor) -> Result<Self> {
        let side = 2 * n;
        let m = |v: usize| v % side;
        let points: Vec<(usize, usize)> = match d {
            DomainDescriptor::Line { b, c } => (0..side).map(|q| (q, m(c + b * q))).collect(),
            DomainDescriptor::VLine { q0 } => (0..side).map(|p| (m(q0), p)).collect(),
            DomainDescriptor::HLine { p0 } => (0..side).map(|q| (q, m(p0))).collect(),
            DomainDescriptor::Segment { q0, p0, len, b } => (0..len).map(|k| (m(q0 + k), m(p0 + b * k))).collect(),
            DomainDescriptor::Parallelogram {
                q0,
                p0,
                width,
                height,
                b,
            } => (0..width)
                .flat_map(|i| (0..height).map(move |j| (i, j)))
                .map(|(i, j)| (m(q0 + i), m(p0 + b * i + j)))
                .collect(),
            DomainDescriptor::Custom => {
                return Err(Error::InvalidArgument(
                    "a custom descriptor needs explicit points".into(),
                ))
            }
        };
        let canonical = match d {
            DomainDescriptor::Line { b, c } => DomainDescriptor::Line { b: m(b), c: m(c) },
            DomainDescriptor::VLine { q0 } => DomainDescriptor::VLine { q0: m(q0) },
            DomainDescriptor::HLine { p0 } => DomainDescriptor::HLine { p0: m(p0) },
            other => other,
        };
        Self::build(
            n,
            points.into_iter().map(|(q, p)| (q, p, Sign::Plus)).collect(),
            canonical,
        )
    }

    pub fn line(n: usize, b: usize, c: usize) -> Result<Self> {
        Self::from_descriptor(n, DomainDescriptor::Line { b, c })
    }

    pub fn vline(n: usize, q0: usize) -> Result<Self> {
        Self::from_descriptor(n, DomainDescriptor::VLine { q0 })
    }

    pub fn hline(n: usize, p0: usize) -> Result<Self> {
        Self::from_descriptor(n, DomainDescriptor::HLine { p0 })
    }

    pub fn single_point(n: usize, q: usize, p: usize, sign: Sign) -> Result<Self> {
        Self::custom(n, vec![(q, p, sign)])
    }

    pub fn negated(&self) -> Self {
        PhaseDomain {
            n: self.n,
            points: self.points.iter().map(|&(q, p, s)| (q, p, s.flipped())).collect(),
            descriptor: DomainDescriptor::Custom,
        }
    }

    /// Fails if the domains share a point or live on different grids.
    pub fn disjoint_union(&self, other: &PhaseDomain) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut points = self.points.clone();
        points.extend_from_slice(&other.points);
        Self::build(self.n, points, DomainDescriptor::Custom)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sorted by `(q, p)`.
    pub fn points(&self) -> &[(usize, usize, Sign)] {
        &self.points
    }

    pub fn descriptor(&self) -> DomainDescriptor {
        self.descriptor
    }

    /// Overrides the descriptor label without touching the points.
    pub fn with_descriptor(mut self, descriptor: DomainDescriptor) -> Self {
        self.descriptor = descriptor;
        self
    }
}

/// Uniform amplitudes `1/√|D|`, sign bit set on negative points, scale `|D|`,
/// on `2N`-dimensional registers.
pub fn domain_program(domain: &PhaseDomain) -> Result<ProgramState> {
    let amplitude = (domain.len() as f64).sqrt().recip();
    let terms = domain
        .points
        .iter()
        .map(|&(q, p, sign)| ProgramTerm {
            q,
            p,
            amplitude,
            sign_bit: sign == Sign::Minus,
        })
        .collect();
    let tol = Tolerances {
        construction: 1e-9,
        ..Tolerances::DEFAULT
    };
    ProgramState::new(domain.n, 2 * domain.n, terms, domain.len() as f64, &tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSum {
    /// `Σ sign·W(q,p)`
    pub raw: f64,
    /// `2N·Σ sign·W(q,p) = scale·σ_z`
    pub polarization_scaled: f64,
    pub sigma_z: f64,
    pub scale: f64,
}

impl DomainSum {
    pub fn from_polarization(n: usize, sigma_z: f64, scale: f64) -> Self {
        let polarization_scaled = scale * sigma_z;
        DomainSum {
            raw: polarization_scaled / (2 * n) as f64,
            polarization_scaled,
            sigma_z,
            scale,
        }
    }
}

/// Domain sum read off the signed array.
pub fn domain_sum_circuit(rho: &QuditState, domain: &PhaseDomain) -> Result<DomainSum> {
    let ps = domain_program(domain)?;
    let result = run_program(rho, &ps)?;
    Ok(DomainSum::from_polarization(domain.n, result.sigma_z, ps.scale()))
}

/// `Σ sign·W(q,p)` straight from a grid.
pub fn domain_sum_direct(w: &WignerGrid, domain: &PhaseDomain) -> Result<f64> {
    if w.n() != domain.n {
        return Err(Error::DimensionMismatch {
            expected: domain.n,
            found: w.n(),
        });
    }
    Ok(domain
        .points
        .iter()
        .map(|&(q, p, s)| s.value() * w.get(q as i64, p as i64))
        .sum())
}

/// Sum over `p − b·q ≡ c` obtained by shearing `ρ` with a cat map until the
/// line is horizontal and running the array on a horizontal-line program.
///
/// `C(b', c')` sends the line to `p ≡ c + c'` with `b' = −b`. The offset
/// `c'` is 0 unless `N` is odd and `b` is odd, where the map with `c' = 0`
/// is not covariant and `c' = 1` is used instead.
pub fn tilted_line_sum_via_cat_map(rho: &QuditState, b: i64, c: i64, tol: &Tolerances) -> Result<f64> {
    let n = rho.dim();
    let side = 2 * n as i64;
    let offset = if n % 2 == 1 && b.rem_euclid(2) == 1 { 1 } else { 0 };
    let map = cat_map_unitary(&CatMapSpec::new(n, -b, offset), tol)?;
    let u = &map.unitary;
    let sheared = &(u * &rho.density_matrix()) * &u.dagger();
    let sheared = QuditState::mixed(sheared, &Tolerances::with_override(tol.circuit.max(1e-10)))?;
    let p0 = (c + offset).rem_euclid(side) as usize;
    Ok(domain_sum_circuit(&sheared, &PhaseDomain::hline(n, p0)?)?.raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::run_point_program;
    use crate::random;
    use crate::wigner::{line_sum, wigner};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn descriptor_text_round_trips() {
        for d in [
            DomainDescriptor::Line { b: 1, c: 2 },
            DomainDescriptor::VLine { q0: 3 },
            DomainDescriptor::HLine { p0: 0 },
            DomainDescriptor::Segment {
                q0: 1,
                p0: 2,
                len: 3,
                b: 1,
            },
            DomainDescriptor::Parallelogram {
                q0: 0,
                p0: 1,
                width: 2,
                height: 2,
                b: 3,
            },
            DomainDescriptor::Custom,
        ] {
            assert_eq!(d.to_string().parse::<DomainDescriptor>().unwrap(), d);
        }
        assert!("line b=1".parse::<DomainDescriptor>().is_err());
        assert!("line b=1 c=2 d=3".parse::<DomainDescriptor>().is_err());
        assert!("circle r=2".parse::<DomainDescriptor>().is_err());
    }

    #[test]
    fn descriptor_shapes() {
        assert_eq!(PhaseDomain::line(3, 1, 2).unwrap().len(), 6);
        let seg = PhaseDomain::from_descriptor(
            4,
            DomainDescriptor::Segment {
                q0: 7,
                p0: 1,
                len: 2,
                b: 2,
            },
        )
        .unwrap();
        assert_eq!(seg.points(), &[(0, 3, Sign::Plus), (7, 1, Sign::Plus)]);
        let too_tall = DomainDescriptor::Parallelogram {
            q0: 0,
            p0: 0,
            width: 1,
            height: 5,
            b: 0,
        };
        assert!(PhaseDomain::from_descriptor(2, too_tall).is_err());
        assert!(PhaseDomain::custom(2, vec![]).is_err());
        assert!(PhaseDomain::single_point(2, 4, 0, Sign::Plus).is_err());
    }

    #[test]
    fn horizontal_line_program_sums_the_line() {
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        for n in 2..=4 {
            let rho = random::mixed_state(n, &mut rng);
            let w = wigner(&rho);
            for p0 in 0..2 * n {
                let s = domain_sum_circuit(&rho, &PhaseDomain::hline(n, p0).unwrap()).unwrap();
                let direct: f64 = (0..2 * n as i64).map(|q| w.get(q, p0 as i64)).sum();
                assert!((s.sigma_z * s.scale / (2 * n) as f64 - direct).abs() < 1e-10);
                assert!((s.raw - direct).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn single_point_matches_point_program() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let rho = random::mixed_state(3, &mut rng);
        for (q, p) in [(0, 0), (2, 5), (5, 1)] {
            let s = domain_sum_circuit(&rho, &PhaseDomain::single_point(3, q, p, Sign::Plus).unwrap()).unwrap();
            let point = run_point_program(&rho, q, p).unwrap();
            assert!((s.sigma_z - point.sigma_z).abs() < 1e-12);
        }
    }

    #[test]
    fn signed_points_subtract() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let rho = random::mixed_state(4, &mut rng);
        let w = wigner(&rho);
        let plus = PhaseDomain::single_point(4, 1, 2, Sign::Plus).unwrap();
        let minus = PhaseDomain::single_point(4, 3, 0, Sign::Minus).unwrap();
        let s = domain_sum_circuit(&rho, &plus.disjoint_union(&minus).unwrap()).unwrap();
        assert!((s.raw - (w.get(1, 2) - w.get(3, 0))).abs() < 1e-10);
        assert!(plus.disjoint_union(&plus.negated()).is_err());
    }

    #[test]
    fn union_is_size_weighted() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let rho = random::mixed_state(3, &mut rng);
        let a = PhaseDomain::hline(3, 1).unwrap();
        let b = PhaseDomain::single_point(3, 0, 0, Sign::Minus).unwrap();
        let (sa, sb) = (
            domain_sum_circuit(&rho, &a).unwrap(),
            domain_sum_circuit(&rho, &b).unwrap(),
        );
        let su = domain_sum_circuit(&rho, &a.disjoint_union(&b).unwrap()).unwrap();
        let weighted = (a.len() as f64 * sa.sigma_z + b.len() as f64 * sb.sigma_z) / (a.len() + b.len()) as f64;
        assert!((su.sigma_z - weighted).abs() < 1e-10);
        assert!((su.raw - (sa.raw + sb.raw)).abs() < 1e-10);
    }

    #[test]
    fn tilted_lines_through_cat_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        let tol = Tolerances::DEFAULT;
        for n in [3, 4] {
            let rho = random::mixed_state(n, &mut rng);
            let w = wigner(&rho);
            for b in 0..2 * n as i64 {
                for c in 0..2 * n as i64 {
                    let via_map = tilted_line_sum_via_cat_map(&rho, b, c, &tol).unwrap();
                    assert!((via_map - line_sum(&w, b, c)).abs() < 1e-10, "N={n} b={b} c={c}");
                }
            }
        }
    }
}
