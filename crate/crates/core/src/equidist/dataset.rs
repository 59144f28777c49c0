use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::EquidistError;
use crate::field::{FieldSpec, PrimeLabel};

/// A real interval whose ends are individually open or closed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Result<Self, EquidistError> {
        Interval::new(lo, hi, false, false)
    }

    pub fn new(lo: f64, hi: f64, lo_open: bool, hi_open: bool) -> Result<Self, EquidistError> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(EquidistError::InvalidInterval(format!("lo = {lo}, hi = {hi}")));
        }
        Ok(Interval { lo, hi, lo_open, hi_open })
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }

    /// Whether `self ⊆ other` as sets.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lo_ok = self.lo > other.lo || (self.lo == other.lo && (self.lo_open || !other.lo_open));
        let hi_ok = self.hi < other.hi || (self.hi == other.hi && (self.hi_open || !other.hi_open));
        lo_ok && hi_ok
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_open { '(' } else { '[' };
        let r = if self.hi_open { ')' } else { ']' };
        write!(f, "{l}{},{}{r}", self.lo, self.hi)
    }
}

impl FromStr for Interval {
    type Err = EquidistError;

    /// `[a,b]`, `(a,b]`, `[a,b)` or `(a,b)`; a bare `a,b` is closed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EquidistError::InvalidInterval(s.to_string());
        let t = s.trim();
        let (lo_open, rest) = match t.chars().next() {
            Some('(') => (true, &t[1..]),
            Some('[') => (false, &t[1..]),
            _ => (false, t),
        };
        let (hi_open, inner) = match rest.chars().last() {
            Some(')') => (true, &rest[..rest.len() - 1]),
            Some(']') => (false, &rest[..rest.len() - 1]),
            _ => (false, rest),
        };
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let lo: f64 = a.trim().parse().map_err(|_| bad())?;
        let hi: f64 = b.trim().parse().map_err(|_| bad())?;
        Interval::new(lo, hi, lo_open, hi_open)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses `2:0=[0,1];3:0=(1,2]`.
pub fn parse_prime_intervals(s: &str) -> Result<BTreeMap<PrimeLabel, Interval>, EquidistError> {
    let mut out = BTreeMap::new();
    for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (label, iv) =
            part.split_once('=').ok_or_else(|| EquidistError::InvalidInterval(format!("{part:?} has no '='")))?;
        let label: PrimeLabel = label.trim().parse()?;
        out.insert(label, iv.parse()?);
    }
    Ok(out)
}

mod label_map {
    use super::*;

    pub fn serialize<S: Serializer>(m: &BTreeMap<PrimeLabel, f64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<PrimeLabel, f64>, D::Error> {
        let raw = BTreeMap::<String, f64>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| k.parse::<PrimeLabel>().map(|k| (k, v)).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// One automorphic representation: archimedean eigenvalues `λ_π`, parities,
/// Hecke eigenvalues `λ_{π,𝔭}` and the weight `|c^r(π)|²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub lambda_inf: Vec<f64>,
    pub xi: Vec<u8>,
    #[serde(with = "label_map")]
    pub lambda_p: BTreeMap<PrimeLabel, f64>,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub src: Option<String>,
}

impl EigenRecord {
    /// `norms` gives `N𝔭` for every label in `lambda_p`.
    pub fn validate(&self, norms: &BTreeMap<PrimeLabel, u64>) -> Result<(), EquidistError> {
        let bad = |m: String| Err(EquidistError::InvalidRecord(m));
        if self.lambda_inf.len() != self.xi.len() {
            return bad(format!("{} eigenvalues for {} parities", self.lambda_inf.len(), self.xi.len()));
        }
        if self.xi.iter().any(|&x| x > 1) {
            return bad(format!("parities {:?}", self.xi));
        }
        if self.lambda_inf.iter().any(|x| !x.is_finite()) {
            return bad(format!("archimedean eigenvalues {:?}", self.lambda_inf));
        }
        if !(self.weight >= 0.0) || !self.weight.is_finite() {
            return bad(format!("weight {}", self.weight));
        }
        for (label, &lambda) in &self.lambda_p {
            let n = *norms.get(label).ok_or_else(|| EquidistError::UnknownPrime(label.to_string()))?;
            if !(0.0..=1.0 + n as f64).contains(&lambda) {
                return bad(format!("λ at {label} = {lambda} outside [0, {}]", 1 + n));
            }
        }
        Ok(())
    }
}

/// Header line of a JSON Lines dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    #[serde(with = "field_str")]
    pub field: FieldSpec,
    /// Generator of the level ideal, in the element syntax of the field.
    pub level: String,
    /// Norms `N𝔭` of the prime labels carried by the records.
    #[serde(with = "norm_map")]
    pub norms: BTreeMap<PrimeLabel, u64>,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

mod field_str {
    use super::*;

    pub fn serialize<S: Serializer>(f: &FieldSpec, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(f)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<FieldSpec, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

mod norm_map {
    use super::*;

    pub fn serialize<S: Serializer>(m: &BTreeMap<PrimeLabel, u64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<PrimeLabel, u64>, D::Error> {
        let raw = BTreeMap::<String, u64>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| k.parse::<PrimeLabel>().map(|k| (k, v)).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct MetaLine {
    meta: DatasetMeta,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub meta: DatasetMeta,
    pub records: Vec<EigenRecord>,
}

impl Dataset {
    /// Checks every record and that all share `d` and the prime-label set.
    pub fn new(meta: DatasetMeta, records: Vec<EigenRecord>) -> Result<Self, EquidistError> {
        let ds = Dataset { meta, records };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<(), EquidistError> {
        let Some(first) = self.records.first() else { return Ok(()) };
        let d = first.lambda_inf.len();
        let labels: BTreeSet<_> = first.lambda_p.keys().collect();
        for (i, r) in self.records.iter().enumerate() {
            r.validate(&self.meta.norms).map_err(|e| EquidistError::InvalidRecord(format!("record {i}: {e}")))?;
            if r.lambda_inf.len() != d {
                return Err(EquidistError::InvalidRecord(format!("record {i} has dimension {}", r.lambda_inf.len())));
            }
            if r.lambda_p.keys().collect::<BTreeSet<_>>() != labels {
                return Err(EquidistError::InvalidRecord(format!("record {i} has a different prime-label set")));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> Option<usize> {
        self.records.first().map(|r| r.lambda_inf.len())
    }

    pub fn prime_labels(&self) -> Vec<PrimeLabel> {
        self.records.first().map(|r| r.lambda_p.keys().copied().collect()).unwrap_or_default()
    }

    pub fn total_weight(&self) -> f64 {
        super::compensated_sum(self.records.iter().map(|r| r.weight))
    }

    /// Rescales the weights so that they sum to `total`.
    pub fn calibrate(&mut self, total: f64) -> Result<(), EquidistError> {
        let current = self.total_weight();
        if !(current > 0.0) || !(total >= 0.0) {
            return Err(EquidistError::InvalidRecord(format!("cannot rescale total weight {current} to {total}")));
        }
        let factor = total / current;
        for r in &mut self.records {
            r.weight *= factor;
        }
        Ok(())
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<(), EquidistError> {
        serde_json::to_writer(&mut w, &MetaLine { meta: self.meta.clone() })?;
        writeln!(w)?;
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            writeln!(w)?;
        }
        Ok(())
    }

    /// Reads records one per line. A leading `{"meta": …}` line is optional;
    /// without it `meta` supplies the field, level and prime norms.
    pub fn read_jsonl<R: BufRead>(r: R, meta: Option<DatasetMeta>) -> Result<Self, EquidistError> {
        let mut header = None;
        let mut records = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if i == 0 && line.trim_start().starts_with("{\"meta\"") {
                let m: MetaLine = serde_json::from_str(&line).map_err(|e| parse_error(i, e))?;
                header = Some(m.meta);
                continue;
            }
            records.push(serde_json::from_str(&line).map_err(|e| parse_error(i, e))?);
        }
        let meta = header.or(meta).ok_or_else(|| EquidistError::Parse { line: 1, message: "no metadata".into() })?;
        Dataset::new(meta, records)
    }

    /// Header `lambda_1..lambda_d, xi_1..xi_d, <prime labels>, weight`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), EquidistError> {
        let d = self.dimension().unwrap_or(0);
        let labels = self.prime_labels();
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<String> = (1..=d).map(|j| format!("lambda_{j}")).collect();
        header.extend((1..=d).map(|j| format!("xi_{j}")));
        header.extend(labels.iter().map(|l| l.to_string()));
        header.push("weight".into());
        out.write_record(&header)?;
        for r in &self.records {
            let mut row: Vec<String> = r.lambda_inf.iter().map(|x| x.to_string()).collect();
            row.extend(r.xi.iter().map(|x| x.to_string()));
            row.extend(labels.iter().map(|l| r.lambda_p[l].to_string()));
            row.push(r.weight.to_string());
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(r: R, meta: DatasetMeta) -> Result<Self, EquidistError> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers()?.clone();
        let d = header.iter().filter(|h| h.starts_with("lambda_")).count();
        let n = header.len();
        if n < 2 * d + 1 || header.get(n - 1) != Some("weight") {
            return Err(EquidistError::Parse { line: 1, message: format!("unexpected header {header:?}") });
        }
        let labels: Vec<PrimeLabel> =
            header.iter().skip(2 * d).take(n - 2 * d - 1).map(str::parse).collect::<Result<_, _>>()?;
        let mut records = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let row = row?;
            let num = |k: usize| -> Result<f64, EquidistError> {
                row.get(k).unwrap_or("").trim().parse().map_err(|_| EquidistError::Parse {
                    line: i + 2,
                    message: format!("column {k}: {:?}", row.get(k)),
                })
            };
            let lambda_inf = (0..d).map(num).collect::<Result<Vec<_>, _>>()?;
            let xi = (d..2 * d).map(|k| num(k).map(|x| x as u8)).collect::<Result<Vec<_>, _>>()?;
            let mut lambda_p = BTreeMap::new();
            for (j, l) in labels.iter().enumerate() {
                lambda_p.insert(*l, num(2 * d + j)?);
            }
            records.push(EigenRecord { lambda_inf, xi, lambda_p, weight: num(n - 1)?, src: None });
        }
        Dataset::new(meta, records)
    }
}

fn parse_error(i: usize, e: serde_json::Error) -> EquidistError {
    EquidistError::Parse { line: i + 1, message: e.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> DatasetMeta {
        DatasetMeta {
            field: FieldSpec::Rational,
            level: "1".into(),
            norms: BTreeMap::from([(PrimeLabel { p: 2, index: 0 }, 2), (PrimeLabel { p: 3, index: 0 }, 3)]),
            provenance: BTreeMap::new(),
        }
    }

    fn record(l: f64, a: f64, b: f64, w: f64) -> EigenRecord {
        EigenRecord {
            lambda_inf: vec![l],
            xi: vec![0],
            lambda_p: BTreeMap::from([(PrimeLabel { p: 2, index: 0 }, a), (PrimeLabel { p: 3, index: 0 }, b)]),
            weight: w,
            src: None,
        }
    }

    #[test]
    fn intervals() {
        let iv: Interval = "(2.8284271247461903, 3]".parse().unwrap();
        assert!(!iv.contains(8f64.sqrt()));
        assert!(iv.contains(3.0));
        assert_eq!(iv.to_string().parse::<Interval>().unwrap(), iv);
        assert!("[2,1]".parse::<Interval>().is_err());
        assert!("[0,1)".parse::<Interval>().unwrap().is_subset_of(&"[0,1]".parse().unwrap()));
        assert!(!"[0,1]".parse::<Interval>().unwrap().is_subset_of(&"(0,1]".parse().unwrap()));
        let m = parse_prime_intervals("2:0=[0,1]; 3=(1,2]").unwrap();
        assert_eq!(m[&PrimeLabel { p: 3, index: 0 }].to_string(), "(1,2]");
    }

    #[test]
    fn jsonl_line_format() {
        let r = record(0.5, 0.75, 1.0, 1.0);
        let line = serde_json::to_string(&r).unwrap();
        assert_eq!(line, r#"{"lambda_inf":[0.5],"xi":[0],"lambda_p":{"2:0":0.75,"3:0":1.0},"weight":1.0}"#);
        let parsed: EigenRecord =
            serde_json::from_str(r#"{"lambda_inf":[0.5],"xi":[0],"lambda_p":{"2:0":0.75,"3:0":1.0},"weight":1.0,"src":"tau"}"#)
                .unwrap();
        assert_eq!(parsed.src.as_deref(), Some("tau"));
    }

    #[test]
    fn roundtrips() {
        let ds = Dataset::new(meta(), vec![record(0.5, 0.75, 1.0, 1.0), record(3.25, 0.1, 2.5, 0.5)]).unwrap();
        let mut buf = Vec::new();
        ds.write_jsonl(&mut buf).unwrap();
        assert_eq!(Dataset::read_jsonl(&buf[..], None).unwrap(), ds);
        let mut buf = Vec::new();
        ds.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("lambda_1,xi_1,2:0,3:0,weight\n"));
        assert_eq!(Dataset::read_csv(&buf[..], meta()).unwrap(), ds);
    }

    #[test]
    fn invalid_records() {
        assert!(Dataset::new(meta(), vec![record(0.5, 3.5, 1.0, 1.0)]).is_err());
        assert!(Dataset::new(meta(), vec![record(0.5, 0.5, 1.0, -1.0)]).is_err());
        let mut r = record(0.5, 0.5, 1.0, 1.0);
        r.lambda_p.remove(&PrimeLabel { p: 3, index: 0 });
        assert!(Dataset::new(meta(), vec![record(0.5, 0.5, 1.0, 1.0), r]).is_err());
    }
}
