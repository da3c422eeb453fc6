//! Line-oriented text formats. Blank lines and `#` comments are ignored
//! everywhere.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::IoError;

/// Numbered content lines of a file.
type Lines<'a> = Vec<(usize, &'a str)>;
use crate::arith::{parse_rational, Poly, Rational, RationalFunction};
use crate::exec::Exec;
use crate::morse::{CriticalComponentRecord, Pairing, ZeroLevelRecord};
use crate::polytope::{AffineInvolution, HPolytope, Halfspace, SubtorusSpec};
use crate::toric::{SignedBettiTable, SimplicialFan};

/// A file read into memory together with its SHA-256 digest.
#[derive(Clone, Debug)]
pub struct Source {
    pub path: PathBuf,
    pub text: String,
    pub sha256: String,
}

impl Source {
    pub fn read(path: impl AsRef<Path>) -> Result<Self, IoError> {
        let path = path.as_ref().to_path_buf();
        let bytes = std::fs::read(&path).map_err(|e| IoError::Read {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let sha256 = hex::encode(Sha256::digest(&bytes));
        let text = String::from_utf8(bytes).map_err(|_| IoError::Read {
            path: path.display().to_string(),
            message: "not valid UTF-8".into(),
        })?;
        Ok(Source { path, text, sha256 })
    }

    /// Wraps in-memory text, e.g. for tests.
    pub fn inline(name: &str, text: &str) -> Self {
        Source {
            path: PathBuf::from(name),
            text: text.to_string(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
        }
    }

    fn lines(&self) -> impl Iterator<Item = (usize, &str)> {
        self.text.lines().enumerate().filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("").trim();
            (!l.is_empty()).then_some((i + 1, l))
        })
    }

    fn err(&self, line: usize, message: impl Into<String>) -> IoError {
        IoError::Parse {
            path: self.path.display().to_string(),
            line,
            message: message.into(),
        }
    }

    fn rationals(&self, line: usize, s: &str) -> Result<Vec<Rational>, IoError> {
        s.split_whitespace()
            .map(|t| parse_rational(t).map_err(|e| self.err(line, e.to_string())))
            .collect()
    }

    fn integers(&self, line: usize, s: &str) -> Result<Vec<i64>, IoError> {
        s.split_whitespace()
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| self.err(line, format!("expected an integer, got {t:?}")))
            })
            .collect()
    }

    fn header(&self, keyword: &str) -> Result<(usize, Lines<'_>), IoError> {
        let mut lines = self.lines();
        let (ln, first) = lines.next().ok_or_else(|| self.err(0, "file is empty"))?;
        let value = first
            .strip_prefix(keyword)
            .and_then(|r| r.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| self.err(ln, format!("expected \"{keyword} <n>\" with n > 0")))?;
        Ok((value, lines.collect()))
    }

    fn matrix(&self, rows_expected: Option<usize>) -> Result<Vec<(usize, Vec<Rational>)>, IoError> {
        let rows: Vec<(usize, Vec<Rational>)> = self
            .lines()
            .map(|(ln, l)| Ok((ln, self.rationals(ln, l)?)))
            .collect::<Result<_, IoError>>()?;
        let width = rows.first().map(|r| r.1.len()).ok_or_else(|| self.err(0, "no rows"))?;
        if let Some((ln, _)) = rows.iter().find(|r| r.1.len() != width) {
            return Err(self.err(*ln, format!("expected {width} entries")));
        }
        if let Some(n) = rows_expected {
            if rows.len() != n {
                return Err(self.err(0, format!("expected {n} rows, found {}", rows.len())));
            }
        }
        Ok(rows)
    }
}

/// `dim n` then one facet per line `a_1 ... a_n | b` for `<a, y> <= b`.
pub fn parse_polytope(src: &Source, exec: Exec) -> Result<HPolytope, IoError> {
    let (n, lines) = src.header("dim")?;
    let facets = lines
        .into_iter()
        .map(|(ln, l)| {
            let (lhs, rhs) = l
                .split_once('|')
                .ok_or_else(|| src.err(ln, "expected \"a_1 ... a_n | b\""))?;
            let normal = src.rationals(ln, lhs)?;
            if normal.len() != n {
                return Err(src.err(ln, format!("expected {n} coefficients, found {}", normal.len())));
            }
            let offset = parse_rational(rhs).map_err(|e| src.err(ln, e.to_string()))?;
            Ok(Halfspace::new(normal, offset))
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(HPolytope::new_with(n, facets, exec)?)
}

pub fn format_polytope(p: &HPolytope) -> String {
    let mut out = format!("dim {}\n", p.dim());
    for h in p.facets() {
        out.push_str(&format!("{h}\n"));
    }
    out
}

/// `n` rows of the matrix `L`, then the translation `c`.
pub fn parse_involution(src: &Source) -> Result<AffineInvolution, IoError> {
    let rows = src.matrix(None)?;
    let n = rows[0].1.len();
    if rows.len() != n + 1 {
        return Err(src.err(
            0,
            format!(
                "expected {n} matrix rows and one translation row, found {} rows",
                rows.len()
            ),
        ));
    }
    let mut rows: Vec<Vec<Rational>> = rows.into_iter().map(|r| r.1).collect();
    let c = rows.pop().expect("n + 1 rows");
    Ok(AffineInvolution::new(rows, c)?)
}

pub fn format_involution(inv: &AffineInvolution) -> String {
    let row = |r: &[Rational]| {
        r.iter()
            .map(crate::arith::format_rational)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    for r in inv.linear() {
        out.push_str(&row(r));
        out.push('\n');
    }
    out.push_str(&row(inv.translation()));
    out.push('\n');
    out
}

/// `k'` rows of the weight matrix.
pub fn parse_subtorus(src: &Source) -> Result<SubtorusSpec, IoError> {
    let rows = src.matrix(None)?;
    Ok(SubtorusSpec::new(rows.into_iter().map(|r| r.1).collect())?)
}

/// `rank n`, ray lines `v_1 ... v_n`, cone lines `c: i_1 ... i_n`.
pub fn parse_fan(src: &Source) -> Result<SimplicialFan, IoError> {
    let (n, lines) = src.header("rank")?;
    let mut rays = Vec::new();
    let mut cones = Vec::new();
    for (ln, l) in lines {
        if let Some(rest) = l.strip_prefix("c:") {
            let idx = src.integers(ln, rest)?;
            if idx.iter().any(|&i| i < 0) {
                return Err(src.err(ln, "negative ray index"));
            }
            cones.push(idx.into_iter().map(|i| i as usize).collect());
        } else {
            let r = src.integers(ln, l)?;
            if r.len() != n {
                return Err(src.err(ln, format!("expected {n} coordinates")));
            }
            rays.push(r);
        }
    }
    Ok(SimplicialFan::new(n, rays, cones)?)
}

pub fn format_fan(fan: &SimplicialFan) -> String {
    let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
    let mut out = format!("rank {}\n", fan.rank());
    for r in fan.rays() {
        out.push_str(&join(&mut r.iter().map(|x| x.to_string())));
        out.push('\n');
    }
    for c in fan.max_cones() {
        out.push_str(&format!("c: {}\n", join(&mut c.iter().map(|x| x.to_string()))));
    }
    out
}

/// `n` rows of an integer matrix.
pub fn parse_automorphism_matrix(src: &Source) -> Result<Vec<Vec<i64>>, IoError> {
    let rows: Vec<Vec<i64>> = src
        .lines()
        .map(|(ln, l)| src.integers(ln, l))
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(src.err(0, "expected a square integer matrix"));
    }
    Ok(rows)
}

/// Lines `deg h+ h-`; unlisted degrees up to the largest are zero.
pub fn parse_betti_table(src: &Source) -> Result<SignedBettiTable, IoError> {
    let mut entries: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    for (ln, l) in src.lines() {
        let v: Vec<u64> = l
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| src.err(ln, format!("expected a natural number, got {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        let [deg, plus, minus] = v[..] else {
            return Err(src.err(ln, "expected \"deg h+ h-\""));
        };
        if entries.insert(deg as usize, (plus, minus)).is_some() {
            return Err(src.err(ln, format!("degree {deg} listed twice")));
        }
    }
    let top = *entries.keys().last().ok_or_else(|| src.err(0, "table is empty"))?;
    let table = (0..=top).map(|d| entries.get(&d).copied().unwrap_or((0, 0))).collect();
    Ok(SignedBettiTable::new(table)?)
}

pub fn format_betti_table(t: &SignedBettiTable) -> String {
    t.to_string()
}

/// Critical data: `comp <id> index=<2m> stab_rank=<r> series=<num>/<den>
/// pair=<id'>` lines and one `zero table=<path>` line, the path being
/// relative to the critical file. `pair=self` marks a self-paired record.
pub fn parse_critical_file(src: &Source) -> Result<(ZeroLevelRecord, Vec<CriticalComponentRecord>, Source), IoError> {
    let mut zero = None;
    let mut comps = Vec::new();
    for (ln, l) in src.lines() {
        let mut words = l.split_whitespace();
        match words.next() {
            Some("zero") => {
                let path = words
                    .next()
                    .and_then(|w| w.strip_prefix("table="))
                    .ok_or_else(|| src.err(ln, "expected \"zero table=<path>\""))?;
                let full = src.path.parent().unwrap_or(Path::new(".")).join(path);
                let table_src = Source::read(&full)?;
                let table0 = parse_betti_table(&table_src)?;
                if zero.replace((ZeroLevelRecord { table0 }, table_src)).is_some() {
                    return Err(src.err(ln, "more than one zero level"));
                }
            }
            Some("comp") => {
                let id = words
                    .next()
                    .ok_or_else(|| src.err(ln, "missing component id"))?
                    .to_string();
                let fields: BTreeMap<&str, &str> = words
                    .map(|w| {
                        w.split_once('=')
                            .ok_or_else(|| src.err(ln, format!("expected key=value, got {w:?}")))
                    })
                    .collect::<Result<_, _>>()?;
                let get = |k: &str| {
                    fields
                        .get(k)
                        .copied()
                        .ok_or_else(|| src.err(ln, format!("missing {k}=")))
                };
                let index = get("index")?
                    .parse()
                    .map_err(|_| src.err(ln, "index must be a natural number"))?;
                let stab_rank = get("stab_rank")?
                    .parse()
                    .map_err(|_| src.err(ln, "stab_rank must be a natural number"))?;
                let t_series = parse_series(get("series")?).map_err(|m| src.err(ln, m))?;
                let pairing = match get("pair")? {
                    "self" => Pairing::SelfFixed,
                    other => Pairing::PairedWith(other.to_string()),
                };
                comps.push(CriticalComponentRecord {
                    id,
                    index,
                    stab_rank,
                    t_series,
                    pairing,
                });
            }
            _ => return Err(src.err(ln, "expected a \"comp\" or \"zero\" record")),
        }
    }
    let (zero, table_src) = zero.ok_or_else(|| src.err(0, "missing \"zero table=<path>\" record"))?;
    Ok((zero, comps, table_src))
}

/// `[..]/[..]` coefficient lists, or a single list for a polynomial.
fn parse_series(s: &str) -> Result<RationalFunction, String> {
    let (num, den) = match s.find("]/[") {
        Some(i) => (&s[..=i], &s[i + 2..]),
        None => (s, "[1]"),
    };
    let num = Poly::parse_list(num).map_err(|e| e.to_string())?;
    let den = Poly::parse_list(den).map_err(|e| e.to_string())?;
    RationalFunction::new(num, den).map_err(|e| e.to_string())
}

/// Written with the denominator's lowest coefficient positive, so that
/// `1-t^2` reads `[1,0,-1]`.
pub fn format_series(f: &RationalFunction) -> String {
    let (num, den) = f.low_normalized();
    format!("{}/{}", num.to_list_string(), den.to_list_string())
}

pub fn format_critical_record(c: &CriticalComponentRecord) -> String {
    let pair = match &c.pairing {
        Pairing::SelfFixed => "self".to_string(),
        Pairing::PairedWith(id) => id.clone(),
    };
    format!(
        "comp {} index={} stab_rank={} series={} pair={}",
        c.id,
        c.index,
        c.stab_rank,
        format_series(&c.t_series),
        pair
    )
}

/// `spectrum v_1 ... v_n` and `weights r_1 ... r_n` lines.
pub fn parse_flag_spec(src: &Source) -> Result<crate::flag::FlagSpec, IoError> {
    let mut spectrum = None;
    let mut weights = None;
    for (ln, l) in src.lines() {
        let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let values = src.rationals(ln, rest)?;
        let slot = match key {
            "spectrum" => &mut spectrum,
            "weights" => &mut weights,
            _ => return Err(src.err(ln, format!("unknown key {key:?}"))),
        };
        if slot.replace(values).is_some() {
            return Err(src.err(ln, format!("{key} given twice")));
        }
    }
    let spectrum = spectrum.ok_or_else(|| src.err(0, "missing spectrum"))?;
    let weights = weights.ok_or_else(|| src.err(0, "missing weights"))?;
    Ok(crate::flag::FlagSpec::new(spectrum, weights)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::PolytopeError;

    #[test]
    fn polytope_round_trip() {
        let src = Source::inline("sq", "# square\ndim 2\n1 0 | 1\n-1 0 | 1\n0 1 | 1\n0 -1 | 1\n");
        let p = parse_polytope(&src, Exec::Sequential).unwrap();
        assert_eq!(p.vertices().len(), 4);
        let again = parse_polytope(&Source::inline("sq2", &format_polytope(&p)), Exec::Sequential).unwrap();
        assert_eq!(again.facets(), p.facets());
    }

    #[test]
    fn polytope_errors_carry_line_numbers() {
        let src = Source::inline("bad", "dim 2\n1 0 | 1\n1 x | 2\n");
        match parse_polytope(&src, Exec::Sequential) {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let src = Source::inline("unb", "dim 2\n1 0 | 1\n0 1 | 1\n-1 -1 | 1\n1 1 | 5\n");
        assert!(matches!(
            parse_polytope(&src, Exec::Sequential),
            Err(IoError::Polytope(PolytopeError::RedundantFacet(3)))
        ));
        assert!(parse_polytope(&Source::inline("e", ""), Exec::Sequential).is_err());
    }

    #[test]
    fn involution_and_subtorus() {
        let inv = parse_involution(&Source::inline("i", "0 0 1\n-1 -1 -1\n1 0 0\n0 1 0\n")).unwrap();
        assert_eq!(inv.dim(), 3);
        assert_eq!(
            parse_involution(&Source::inline("i2", &format_involution(&inv))).unwrap(),
            inv
        );
        assert!(parse_involution(&Source::inline("i", "1 0\n0 1\n")).is_err());
        let sub = parse_subtorus(&Source::inline("s", "1 1 0\n")).unwrap();
        assert_eq!(sub.rank(), 1);
    }

    #[test]
    fn fan_round_trip() {
        let text = "rank 2\n1 0\n0 1\n-1 0\n0 -1\nc: 0 1\nc: 1 2\nc: 2 3\nc: 3 0\n";
        let fan = parse_fan(&Source::inline("f", text)).unwrap();
        assert_eq!(fan.max_cones().len(), 4);
        assert_eq!(parse_fan(&Source::inline("f2", &format_fan(&fan))).unwrap(), fan);
        assert_eq!(
            parse_automorphism_matrix(&Source::inline("a", "0 1\n1 0\n")).unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
    }

    #[test]
    fn betti_tables() {
        let t = parse_betti_table(&Source::inline("b", "0 1 0\n2 1 1\n4 1 0\n")).unwrap();
        assert_eq!(t.entries(), &[(1, 0), (0, 0), (1, 1), (0, 0), (1, 0)]);
        assert_eq!(
            parse_betti_table(&Source::inline("b", &format_betti_table(&t))).unwrap(),
            t
        );
        assert!(parse_betti_table(&Source::inline("b", "0 1 0\n0 1 0\n")).is_err());
        assert!(parse_betti_table(&Source::inline("b", "0 1 -1\n")).is_err());
    }

    #[test]
    fn series_literals() {
        let s = parse_series("[1,0,1]/[1,0,-1]").unwrap();
        assert_eq!(format_series(&s), "[1,0,1]/[1,0,-1]");
        assert_eq!(
            parse_series("[1,1]").unwrap(),
            RationalFunction::from_poly(Poly::from_ints(&[1, 1]))
        );
        assert!(parse_series("[1]/[]").is_err());
    }

    #[test]
    fn flag_specs() {
        let s = parse_flag_spec(&Source::inline("f", "spectrum 2 0 -2\nweights 1 2 3\n")).unwrap();
        assert_eq!(s.n(), 3);
        assert!(parse_flag_spec(&Source::inline("f", "spectrum 1 -1\n")).is_err());
        assert!(parse_flag_spec(&Source::inline("f", "spectrum 1 1/2\nweights 1 2\n")).is_err());
    }
}
