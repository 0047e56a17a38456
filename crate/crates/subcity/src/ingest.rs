//! CSV readers and writers for the interchange files: OD edge lists, node
//! tables, partitions and score vectors.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use subcity_core::community::Partition;
use subcity_core::geo::{GeoPoint, Hemisphere, UtmCoord};
use subcity_core::{NodeId, OdRecord};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: unrecognized schema: {detail}")]
    Schema { path: PathBuf, detail: String },
    #[error("{path}: line {line}: {detail}")]
    Row {
        path: PathBuf,
        line: u64,
        detail: String,
    },
    #[error("{path}: duplicate id {id}")]
    DuplicateId { path: PathBuf, id: NodeId },
    #[error("node {0} has no lat/lon")]
    MissingGeo(NodeId),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = IngestError> = std::result::Result<T, E>;

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })
}

/// A parsed CSV: trimmed header names plus records with their line numbers.
struct Table {
    path: PathBuf,
    headers: Vec<String>,
    rows: Vec<(u64, csv::StringRecord)>,
}

impl Table {
    fn read<R: Read>(reader: R, path: &Path) -> Result<Table> {
        let csv_err = |source| IngestError::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(false)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(csv_err)?
            .iter()
            .map(|h| h.trim_start_matches('\u{feff}').to_string())
            .collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(csv_err)?;
            let line = rec.position().map_or(0, |p| p.line());
            rows.push((line, rec));
        }
        Ok(Table {
            path: path.to_path_buf(),
            headers,
            rows,
        })
    }

    fn column(&self, aliases: &[&str]) -> Option<usize> {
        self.headers
            .iter()
            .position(|h| aliases.iter().any(|a| h.eq_ignore_ascii_case(a)))
    }

    fn schema_error(&self, detail: impl Into<String>) -> IngestError {
        IngestError::Schema {
            path: self.path.clone(),
            detail: detail.into(),
        }
    }

    fn row_error(&self, line: u64, detail: impl Into<String>) -> IngestError {
        IngestError::Row {
            path: self.path.clone(),
            line,
            detail: detail.into(),
        }
    }

    fn warn_unused(&self, used: &[Option<usize>]) {
        for (i, h) in self.headers.iter().enumerate() {
            if !used.contains(&Some(i)) {
                log::warn!("{}: ignoring column `{h}`", self.path.display());
            }
        }
    }

    fn parse_id(&self, line: u64, rec: &csv::StringRecord, col: usize) -> Result<NodeId> {
        let raw = rec.get(col).unwrap_or("");
        if raw.is_empty() {
            return Err(self.row_error(line, format!("empty `{}`", self.headers[col])));
        }
        raw.parse::<u64>()
            .map(NodeId)
            .map_err(|_| self.row_error(line, format!("`{}` is not a non-negative integer id: {raw:?}", self.headers[col])))
    }

    fn parse_f64(&self, line: u64, rec: &csv::StringRecord, col: Option<usize>) -> Result<Option<f64>> {
        let Some(col) = col else { return Ok(None) };
        let raw = rec.get(col).unwrap_or("");
        if raw.is_empty() {
            return Ok(None);
        }
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(self.row_error(line, format!("`{}` is not a number: {raw:?}", self.headers[col]))),
        }
    }
}

const SOURCE: &[&str] = &["home_id", "source"];
const TARGET: &[&str] = &["work_id", "target"];
const COUNT: &[&str] = &["count", "weight"];

/// Read OD records. Accepts `home_id,work_id` or `Source,Target` headers
/// and an optional `count` or `weight` column (default 1).
pub fn read_edges(path: &Path) -> Result<Vec<OdRecord>> {
    read_edges_from(open(path)?, path)
}

pub fn read_edges_from<R: Read>(reader: R, path: &Path) -> Result<Vec<OdRecord>> {
    let t = Table::read(reader, path)?;
    let (Some(s), Some(d)) = (t.column(SOURCE), t.column(TARGET)) else {
        return Err(t.schema_error(format!(
            "expected home_id,work_id or Source,Target, found {}",
            t.headers.join(",")
        )));
    };
    let c = t.column(COUNT);
    t.warn_unused(&[Some(s), Some(d), c]);
    let mut out = Vec::with_capacity(t.rows.len());
    for (line, rec) in &t.rows {
        let source = t.parse_id(*line, rec, s)?;
        let target = t.parse_id(*line, rec, d)?;
        let count = match c.map(|c| rec.get(c).unwrap_or("")) {
            None | Some("") => 1,
            Some(raw) => match raw.parse::<i64>() {
                Ok(v) if v >= 1 => v as u64,
                Ok(v) => return Err(t.row_error(*line, format!("count must be at least 1, got {v}"))),
                Err(_) => return Err(t.row_error(*line, format!("count is not an integer: {raw:?}"))),
            },
        };
        out.push(OdRecord { source, target, count });
    }
    Ok(out)
}

pub fn write_edges(records: &[OdRecord], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    };
    writeln!(w, "Source,Target,count").map_err(io)?;
    for r in records {
        writeln!(w, "{},{},{}", r.source, r.target, r.count).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// One row of a node table. Coordinates may be UTM, geographic, or both.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeMeta {
    pub id: NodeId,
    pub utm: Option<(f64, f64)>,
    pub zone: Option<u8>,
    pub hemisphere: Option<Hemisphere>,
    pub geo: Option<GeoPoint>,
    pub community: Option<String>,
}

impl NodeMeta {
    pub fn new(id: NodeId) -> Self {
        NodeMeta {
            id,
            utm: None,
            zone: None,
            hemisphere: None,
            geo: None,
            community: None,
        }
    }

    /// Geographic position, converting from UTM with the row's own zone or
    /// the given default.
    pub fn resolve_geo(&self, zone: u8, hemisphere: Hemisphere) -> subcity_core::Result<Option<GeoPoint>> {
        if let Some(p) = self.geo {
            return Ok(Some(p));
        }
        let Some((e, n)) = self.utm else { return Ok(None) };
        let c = UtmCoord::new(e, n, self.zone.unwrap_or(zone), self.hemisphere.unwrap_or(hemisphere))?;
        subcity_core::geo::utm_to_geo(c).map(Some)
    }
}

/// Accepted header names, matched case-insensitively.
pub mod aliases {
    pub const ID: &[&str] = &["id", "node_id", "node", "tower_id"];
    pub const EASTING: &[&str] = &["easting", "utm_x", "x"];
    pub const NORTHING: &[&str] = &["northing", "utm_y", "y"];
    pub const LAT: &[&str] = &["lat", "latitude"];
    pub const LON: &[&str] = &["lon", "lng", "long", "longitude"];
    pub const ZONE: &[&str] = &["zone", "utm_zone"];
    pub const HEMISPHERE: &[&str] = &["hemisphere", "hemi"];
    pub const COMMUNITY: &[&str] = &["community", "ref_community", "label", "cluster"];
}

fn parse_hemisphere(raw: &str) -> Option<Hemisphere> {
    match raw.to_ascii_uppercase().as_str() {
        "N" | "NORTH" => Some(Hemisphere::North),
        "S" | "SOUTH" => Some(Hemisphere::South),
        _ => None,
    }
}

pub fn read_nodes(path: &Path) -> Result<Vec<NodeMeta>> {
    read_nodes_from(open(path)?, path)
}

pub fn read_nodes_from<R: Read>(reader: R, path: &Path) -> Result<Vec<NodeMeta>> {
    let t = Table::read(reader, path)?;
    let id = t
        .column(aliases::ID)
        .ok_or_else(|| t.schema_error("node table needs an `id` column"))?;
    let cols = [
        t.column(aliases::EASTING),
        t.column(aliases::NORTHING),
        t.column(aliases::LAT),
        t.column(aliases::LON),
        t.column(aliases::ZONE),
        t.column(aliases::HEMISPHERE),
        t.column(aliases::COMMUNITY),
    ];
    let [e, n, lat, lon, zone, hemi, comm] = cols;
    let mut used = cols.to_vec();
    used.push(Some(id));
    t.warn_unused(&used);

    let mut seen = BTreeMap::new();
    let mut out = Vec::with_capacity(t.rows.len());
    for (line, rec) in &t.rows {
        let line = *line;
        let mut m = NodeMeta::new(t.parse_id(line, rec, id)?);
        if seen.insert(m.id, line).is_some() {
            return Err(IngestError::DuplicateId {
                path: t.path.clone(),
                id: m.id,
            });
        }
        if let Some(z) = zone.and_then(|c| rec.get(c)).filter(|s| !s.is_empty()) {
            m.zone = Some(
                z.parse::<u8>()
                    .ok()
                    .filter(|z| (1..=60).contains(z))
                    .ok_or_else(|| t.row_error(line, format!("UTM zone must be 1..60, got {z:?}")))?,
            );
        }
        if let Some(h) = hemi.and_then(|c| rec.get(c)).filter(|s| !s.is_empty()) {
            m.hemisphere = Some(
                parse_hemisphere(h).ok_or_else(|| t.row_error(line, format!("hemisphere must be N or S, got {h:?}")))?,
            );
        }
        match (t.parse_f64(line, rec, e)?, t.parse_f64(line, rec, n)?) {
            (Some(e), Some(n)) => {
                // range check with a placeholder zone; the zone only matters
                // for conversion
                UtmCoord::new(e, n, 1, Hemisphere::North).map_err(|err| t.row_error(line, err.to_string()))?;
                m.utm = Some((e, n));
            }
            (None, None) => {}
            _ => return Err(t.row_error(line, "easting and northing must be given together")),
        }
        match (t.parse_f64(line, rec, lat)?, t.parse_f64(line, rec, lon)?) {
            (Some(a), Some(o)) => {
                m.geo = Some(GeoPoint::new(a, o).map_err(|err| t.row_error(line, err.to_string()))?);
            }
            (None, None) => {}
            _ => return Err(t.row_error(line, "lat and lon must be given together")),
        }
        m.community = comm
            .and_then(|c| rec.get(c))
            .filter(|s| !s.is_empty())
            .map(str::to_string);
        out.push(m);
    }
    Ok(out)
}

/// Shortest round-trip decimal, padded to at least nine fractional digits.
pub fn format_coord(v: f64) -> String {
    let s = format!("{v}");
    let frac = s.split_once('.').map_or(0, |(_, f)| f.len());
    if frac >= 9 {
        s
    } else {
        format!("{v:.9}")
    }
}

/// Write `id,lat,lon,community`, ascending id.
pub fn write_nodes_with_geo(metas: &[NodeMeta], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    write_nodes_with_geo_to(metas, &mut w).map_err(|e| match e {
        IngestError::Io { source, .. } => IngestError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })?;
    w.flush().map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_nodes_with_geo_to<W: Write>(metas: &[NodeMeta], w: &mut W) -> Result<()> {
    let mut sorted: Vec<&NodeMeta> = metas.iter().collect();
    sorted.sort_by_key(|m| m.id);
    let mut buf = String::from("id,lat,lon,community\n");
    for m in sorted {
        let p = m.geo.ok_or(IngestError::MissingGeo(m.id))?;
        buf.push_str(&format!(
            "{},{},{},{}\n",
            m.id,
            format_coord(p.lat),
            format_coord(p.lon),
            m.community.as_deref().unwrap_or("")
        ));
    }
    w.write_all(buf.as_bytes()).map_err(|source| IngestError::Io {
        path: PathBuf::new(),
        source,
    })
}

/// A partition together with the original label of each dense community
/// index.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledPartition {
    pub partition: Partition,
    pub labels: Vec<String>,
}

/// Read any table with an id and a community column; other columns are
/// ignored. Integer labels are ordered numerically, others lexically.
pub fn read_partition(path: &Path) -> Result<LabeledPartition> {
    let t = Table::read(open(path)?, path)?;
    let id = t
        .column(aliases::ID)
        .ok_or_else(|| t.schema_error("partition needs an `id` column"))?;
    let comm = t
        .column(aliases::COMMUNITY)
        .or_else(|| t.column(&["modularity_class"]))
        .ok_or_else(|| t.schema_error("partition needs a `community` column"))?;
    let mut pairs = Vec::with_capacity(t.rows.len());
    for (line, rec) in &t.rows {
        let label = rec.get(comm).unwrap_or("");
        if label.is_empty() {
            return Err(t.row_error(*line, "empty community label"));
        }
        pairs.push((t.parse_id(*line, rec, id)?, label.to_string()));
    }
    let invalid = |e: subcity_core::Error| IngestError::Invalid(format!("{}: {e}", path.display()));
    let numeric: Option<Vec<(NodeId, i64)>> = pairs
        .iter()
        .map(|(n, l)| l.parse::<i64>().ok().map(|v| (*n, v)))
        .collect();
    match numeric {
        Some(v) => {
            let labels: BTreeSet<i64> = v.iter().map(|p| p.1).collect();
            Ok(LabeledPartition {
                partition: Partition::from_labels(v).map_err(invalid)?,
                labels: labels.iter().map(i64::to_string).collect(),
            })
        }
        None => {
            let labels: BTreeSet<String> = pairs.iter().map(|p| p.1.clone()).collect();
            Ok(LabeledPartition {
                partition: Partition::from_labels(pairs).map_err(invalid)?,
                labels: labels.into_iter().collect(),
            })
        }
    }
}

/// Write `id,community`, ascending id, dense community indices.
pub fn write_partition(p: &Partition, path: &Path) -> Result<()> {
    let mut buf = String::from("id,community\n");
    for (n, c) in p.nodes().iter().zip(p.assignment()) {
        buf.push_str(&format!("{n},{c}\n"));
    }
    write_string(&buf, path)
}

/// Read `id,<score>`; the score column is the first one after `id`.
pub fn read_scores(path: &Path) -> Result<(String, Vec<(NodeId, f64)>)> {
    let t = Table::read(open(path)?, path)?;
    let id = t
        .column(aliases::ID)
        .ok_or_else(|| t.schema_error("score table needs an `id` column"))?;
    let col = (0..t.headers.len())
        .find(|&c| c != id)
        .ok_or_else(|| t.schema_error("score table needs a score column"))?;
    let mut out = Vec::with_capacity(t.rows.len());
    for (line, rec) in &t.rows {
        let id = t.parse_id(*line, rec, id)?;
        let v = t
            .parse_f64(*line, rec, Some(col))?
            .ok_or_else(|| t.row_error(*line, "missing score"))?;
        out.push((id, v));
    }
    out.sort_by_key(|r| r.0);
    if let Some(w) = out.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(IngestError::DuplicateId {
            path: t.path.clone(),
            id: w[0].0,
        });
    }
    Ok((t.headers[col].clone(), out))
}

pub fn write_string(s: &str, path: &Path) -> Result<()> {
    std::fs::write(path, s).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(s: &str) -> Result<Vec<OdRecord>> {
        read_edges_from(s.as_bytes(), Path::new("e.csv"))
    }

    fn nodes(s: &str) -> Result<Vec<NodeMeta>> {
        read_nodes_from(s.as_bytes(), Path::new("n.csv"))
    }

    #[test]
    fn raw_header_defaults_count() {
        assert_eq!(edges("home_id,work_id\n7,12\n").unwrap(), vec![OdRecord::new(7, 12, 1)]);
    }

    #[test]
    fn renamed_header_with_count() {
        assert_eq!(edges("Source,Target,count\n7,12,9\n").unwrap(), vec![OdRecord::new(7, 12, 9)]);
    }

    #[test]
    fn unknown_schema() {
        let e = edges("foo,bar\n1,2\n").unwrap_err();
        assert!(e.to_string().contains("unrecognized schema"), "{e}");
    }

    #[test]
    fn bad_rows_name_the_line() {
        let e = edges("Source,Target,count\n1,2,1\n1,2,0\n").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = edges("Source,Target\n1,x\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(edges("Source,Target,count\n1,2,1.5\n").is_err());
        assert!(edges("Source,Target\n-1,2\n").is_err());
        assert!(edges("Source,Target\n,2\n").is_err());
    }

    #[test]
    fn crlf_and_extra_columns() {
        let r = edges("home_id,work_id,day\r\n1,2,mon\r\n3,4,tue\r\n").unwrap();
        assert_eq!(r, vec![OdRecord::new(1, 2, 1), OdRecord::new(3, 4, 1)]);
    }

    #[test]
    fn node_schema_mapping() {
        let m = nodes("id,easting,northing,lat,lon,community\n5,345000,6295000,,,a\n").unwrap();
        assert_eq!(m[0].id, NodeId(5));
        assert_eq!(m[0].utm, Some((345000.0, 6295000.0)));
        assert_eq!(m[0].geo, None);
        assert_eq!(m[0].community.as_deref(), Some("a"));
    }

    #[test]
    fn node_errors() {
        let e = nodes("id,lat,lon\n1,0,0\n1,1,1\n").unwrap_err();
        assert!(e.to_string().contains("duplicate id 1"), "{e}");
        assert!(nodes("id,lat,lon\n1,95,0\n").is_err());
        assert!(nodes("id,lat,lon\n1,5,\n").is_err());
        assert!(nodes("lat,lon\n1,5\n").is_err());
        assert!(nodes("id,easting,northing\n1,-5,100\n").is_err());
        assert!(nodes("id,easting,northing,zone\n1,345000,6295000,61\n").is_err());
    }

    #[test]
    fn coordinates_keep_nine_decimals() {
        assert_eq!(format_coord(-33.5), "-33.500000000");
        assert_eq!(format_coord(0.1 + 0.2), "0.30000000000000004");
        assert_eq!(format_coord(-70.123456789012), "-70.123456789012");
    }

    #[test]
    fn geo_round_trip() {
        let metas: Vec<NodeMeta> = [(3u64, -33.45, -70.66), (1, -33.123456789123, -70.5)]
            .iter()
            .map(|&(id, a, o)| NodeMeta {
                geo: Some(GeoPoint::new(a, o).unwrap()),
                community: Some("b".into()),
                ..NodeMeta::new(NodeId(id))
            })
            .collect();
        let mut buf = Vec::new();
        write_nodes_with_geo_to(&metas, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("id,lat,lon,community\n1,"));
        let back = nodes(&text).unwrap();
        assert_eq!(back[0].geo, metas[1].geo);
        assert_eq!(back[1].geo, metas[0].geo);
    }

    #[test]
    fn empty_and_missing_geo() {
        let mut buf = Vec::new();
        write_nodes_with_geo_to(&[], &mut buf).unwrap();
        assert_eq!(buf, b"id,lat,lon,community\n");
        assert!(write_nodes_with_geo_to(&[NodeMeta::new(NodeId(1))], &mut Vec::new()).is_err());
    }
}
