//! CSV ingestion, result serialization and raster output.
//!
//! File schemas (all with a header row):
//!
//! * countries: `code,kind,anchor_lat,anchor_lon`, kind `arctic` or
//!   `non-arctic`; anchors may be empty for Arctic countries.
//! * world: `cell_id,row,col,lat,lon,owner`, owner a country code or `INTL`.
//! * layer: `cell_id,resource,value` plus an optional `route_id` column.
//!   Unlisted cells are 0.
//! * result: `classes.csv` (`cell_id,row,col,class`), `forecasts.csv`,
//!   `hotspots.csv`, `summary.toml` and a plain P2 PGM raster.
//!
//! Writers order rows by cell id and print reals in shortest round-trip form,
//! so output is byte-stable for fixed input.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};
use serde::{Deserialize, Serialize};

use crate::aggregation::{ConflictClassField, SortedGradeVector};
use crate::error::{Error, Result};
use crate::model::{
    build_world, CellId, Country, CountryKind, GridSpec, LatLon, Owner, World,
    DEFAULT_SOUTHERN_BOUND,
};
use crate::scenario::{Hotspot, RunComparison, RunResult, SweepRow};
use crate::utility::{GradeField, Resource, ResourceLayer};

pub const INTERNATIONAL: &str = "INTL";

pub const COUNTRIES_HEADER: &[&str] = &["code", "kind", "anchor_lat", "anchor_lon"];
pub const WORLD_HEADER: &[&str] = &["cell_id", "row", "col", "lat", "lon", "owner"];
pub const LAYER_HEADER: &[&str] = &["cell_id", "resource", "value"];
pub const LAYER_ROUTE_HEADER: &[&str] = &["cell_id", "resource", "value", "route_id"];
pub const CLASSES_HEADER: &[&str] = &["cell_id", "row", "col", "class"];
pub const FORECASTS_HEADER: &[&str] = &["cell_id", "oil", "gas", "fish", "maritime"];
pub const HOTSPOTS_HEADER: &[&str] = &["rank", "cell_id", "row", "col", "class", "vector"];

/// A parsed CSV document that remembers where every row came from.
struct Table<'a> {
    file: &'a str,
    rows: Vec<(u64, StringRecord)>,
    columns: HashMap<String, usize>,
}

impl<'a> Table<'a> {
    fn parse(file: &'a str, text: &str, accepted: &[&[&str]]) -> Result<Self> {
        let mut reader = ReaderBuilder::new()
            .has_headers(true)
            .trim(Trim::All)
            .from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| csv_error(file, &e))?.clone();
        let names: Vec<&str> = header.iter().collect();
        if !accepted.contains(&names.as_slice()) {
            let expected: Vec<String> = accepted.iter().map(|h| h.join(",")).collect();
            return Err(Error::parse(
                file,
                1,
                "header",
                format!(
                    "expected `{}`, found `{}`",
                    expected.join("` or `"),
                    names.join(",")
                ),
            ));
        }
        let columns = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.to_string(), i))
            .collect();
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| csv_error(file, &e))?;
            if rec.iter().all(|f| f.is_empty()) {
                continue;
            }
            let line = rec.position().map_or(0, |p| p.line());
            rows.push((line, rec));
        }
        Ok(Self {
            file,
            rows,
            columns,
        })
    }

    fn has(&self, column: &str) -> bool {
        self.columns.contains_key(column)
    }

    fn get<'r>(&self, rec: &'r StringRecord, line: u64, column: &str) -> Result<&'r str> {
        self.columns
            .get(column)
            .and_then(|&i| rec.get(i))
            .ok_or_else(|| Error::parse(self.file, line, column, "missing value"))
    }

    fn value<T: std::str::FromStr>(&self, rec: &StringRecord, line: u64, column: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.get(rec, line, column)?;
        raw.parse::<T>()
            .map_err(|e| Error::parse(self.file, line, column, format!("`{raw}`: {e}")))
    }

    fn err(&self, line: u64, column: &str, msg: impl Into<String>) -> Error {
        Error::parse(self.file, line, column, msg)
    }
}

fn csv_error(file: &str, e: &csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::parse(file, line, "-", e.to_string())
}

fn csv_row(out: &mut String, fields: &[&dyn std::fmt::Display]) {
    for (i, f) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "{f}").expect("writing to a String");
    }
    out.push('\n');
}

fn header(cols: &[&str]) -> String {
    let mut s = cols.join(",");
    s.push('\n');
    s
}

pub fn parse_countries(file: &str, text: &str) -> Result<Vec<Country>> {
    let t = Table::parse(file, text, &[COUNTRIES_HEADER])?;
    let mut out: Vec<Country> = Vec::new();
    for (line, rec) in &t.rows {
        let line = *line;
        let code = t.get(rec, line, "code")?;
        if code.is_empty() || code == INTERNATIONAL {
            return Err(t.err(
                line,
                "code",
                format!("`{code}` is not a usable country code"),
            ));
        }
        if out.iter().any(|c| c.code.as_str() == code) {
            return Err(t.err(line, "code", format!("duplicate country code `{code}`")));
        }
        let kind: CountryKind = t.value(rec, line, "kind")?;
        let lat = t.get(rec, line, "anchor_lat")?;
        let lon = t.get(rec, line, "anchor_lon")?;
        let anchor = match (lat.is_empty(), lon.is_empty()) {
            (true, true) => None,
            (false, false) => {
                let lat: f64 = t.value(rec, line, "anchor_lat")?;
                let lon: f64 = t.value(rec, line, "anchor_lon")?;
                if !(-90.0..=90.0).contains(&lat) {
                    return Err(t.err(line, "anchor_lat", format!("{lat} outside [-90, 90]")));
                }
                if !(-180.0..180.0).contains(&lon) {
                    return Err(t.err(line, "anchor_lon", format!("{lon} outside [-180, 180)")));
                }
                Some(LatLon::new(lat, lon))
            }
            (true, false) => {
                return Err(t.err(line, "anchor_lat", "missing while anchor_lon is set"))
            }
            (false, true) => {
                return Err(t.err(line, "anchor_lon", "missing while anchor_lat is set"))
            }
        };
        if kind == CountryKind::NonArctic && anchor.is_none() {
            return Err(t.err(
                line,
                "anchor_lat",
                "non-Arctic countries need an anchor coordinate",
            ));
        }
        out.push(Country {
            code: code.into(),
            kind,
            anchor,
        });
    }
    Ok(out)
}

pub fn write_countries(countries: &[Country]) -> String {
    let mut out = header(COUNTRIES_HEADER);
    for c in countries {
        let (lat, lon) = match c.anchor {
            Some(a) => (a.lat.to_string(), a.lon.to_string()),
            None => (String::new(), String::new()),
        };
        csv_row(&mut out, &[&c.code, &c.kind.as_str(), &lat, &lon]);
    }
    out
}

/// Parses a world grid against an already-parsed country list. The grid
/// shape is inferred from the largest row and column indices.
pub fn parse_world(file: &str, text: &str, countries: &[Country]) -> Result<World> {
    let t = Table::parse(file, text, &[WORLD_HEADER])?;
    if t.rows.is_empty() {
        return Err(Error::Input {
            file: file.to_owned(),
            message: "no cells".into(),
        });
    }
    struct Row {
        line: u64,
        id: CellId,
        row: usize,
        col: usize,
        center: LatLon,
        owner: Owner,
    }
    let mut rows = Vec::with_capacity(t.rows.len());
    let mut ids: HashMap<CellId, u64> = HashMap::new();
    for (line, rec) in &t.rows {
        let line = *line;
        let id: CellId = t.value(rec, line, "cell_id")?;
        if let Some(first) = ids.insert(id, line) {
            return Err(t.err(
                line,
                "cell_id",
                format!("duplicate cell id {id} (first on line {first})"),
            ));
        }
        let lat: f64 = t.value(rec, line, "lat")?;
        let lon: f64 = t.value(rec, line, "lon")?;
        if !(-90.0..=90.0).contains(&lat) {
            return Err(t.err(line, "lat", format!("{lat} outside [-90, 90]")));
        }
        if lat < DEFAULT_SOUTHERN_BOUND {
            return Err(t.err(
                line,
                "lat",
                format!("{lat} is south of {DEFAULT_SOUTHERN_BOUND}"),
            ));
        }
        if !(-180.0..180.0).contains(&lon) {
            return Err(t.err(line, "lon", format!("{lon} outside [-180, 180)")));
        }
        let owner = match t.get(rec, line, "owner")? {
            INTERNATIONAL => Owner::International,
            code => {
                let c = countries
                    .iter()
                    .find(|c| c.code.as_str() == code)
                    .ok_or_else(|| {
                        t.err(line, "owner", format!("unknown country code `{code}`"))
                    })?;
                if !c.is_arctic() {
                    return Err(t.err(
                        line,
                        "owner",
                        format!("non-Arctic country `{code}` cannot own cells"),
                    ));
                }
                Owner::owned(code)
            }
        };
        rows.push(Row {
            line,
            id,
            row: t.value(rec, line, "row")?,
            col: t.value(rec, line, "col")?,
            center: LatLon::new(lat, lon),
            owner,
        });
    }
    let n_rows = rows.iter().map(|r| r.row).max().unwrap_or(0) + 1;
    let n_cols = rows.iter().map(|r| r.col).max().unwrap_or(0) + 1;
    let mut slots: Vec<Option<&Row>> = vec![None; n_rows * n_cols];
    for r in &rows {
        let slot = &mut slots[r.row * n_cols + r.col];
        if let Some(prev) = slot {
            return Err(t.err(
                r.line,
                "row",
                format!(
                    "grid position ({}, {}) already used by {} on line {}",
                    r.row, r.col, prev.id, prev.line
                ),
            ));
        }
        *slot = Some(r);
    }
    if let Some(missing) = slots.iter().position(Option::is_none) {
        return Err(Error::Input {
            file: file.to_owned(),
            message: format!(
                "grid position ({}, {}) has no cell; expected a full {n_rows}x{n_cols} grid",
                missing / n_cols,
                missing % n_cols
            ),
        });
    }
    let slots: Vec<&Row> = slots.into_iter().flatten().collect();
    let grid = GridSpec::new(n_rows, n_cols, slots.iter().map(|r| r.center).collect())?;
    build_world(
        grid,
        countries.to_vec(),
        slots.iter().map(|r| r.owner.clone()).collect(),
    )?
    .with_cell_ids(slots.iter().map(|r| r.id).collect())
}

fn by_cell_id(ids: &[CellId]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by_key(|&i| ids[i]);
    order
}

pub fn write_world(world: &World) -> String {
    let mut out = header(WORLD_HEADER);
    let grid = world.grid();
    for cell in by_cell_id(world.cell_ids()) {
        let (row, col) = grid.row_col(cell);
        let c = grid.center(cell);
        let owner = match world.owner(cell) {
            Owner::Owned(code) => code.as_str(),
            Owner::International => INTERNATIONAL,
        };
        csv_row(
            &mut out,
            &[&world.cell_id(cell), &row, &col, &c.lat, &c.lon, &owner],
        );
    }
    out
}

pub fn parse_layer(
    file: &str,
    text: &str,
    world: &World,
    resource: Resource,
) -> Result<ResourceLayer> {
    if text.trim().is_empty() {
        return Ok(ResourceLayer::zeros(resource, world.len()));
    }
    let t = Table::parse(file, text, &[LAYER_HEADER, LAYER_ROUTE_HEADER])?;
    let index: HashMap<CellId, usize> = world
        .cell_ids()
        .iter()
        .enumerate()
        .map(|(i, id)| (*id, i))
        .collect();
    let mut values = vec![0.0; world.len()];
    let mut routes: Option<Vec<Option<String>>> =
        t.has("route_id").then(|| vec![None; world.len()]);
    let mut seen: HashMap<usize, u64> = HashMap::new();
    for (line, rec) in &t.rows {
        let line = *line;
        let id: CellId = t.value(rec, line, "cell_id")?;
        let cell = *index
            .get(&id)
            .ok_or_else(|| t.err(line, "cell_id", format!("unknown cell id {id}")))?;
        if let Some(first) = seen.insert(cell, line) {
            return Err(t.err(
                line,
                "cell_id",
                format!("duplicate cell id {id} (first on line {first})"),
            ));
        }
        let r: Resource = t.value(rec, line, "resource")?;
        if r != resource {
            return Err(t.err(line, "resource", format!("expected {resource}, found {r}")));
        }
        let v: f64 = t.value(rec, line, "value")?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(t.err(line, "value", format!("{v} must be finite and nonnegative")));
        }
        values[cell] = v;
        if let Some(routes) = routes.as_mut() {
            let route = t.get(rec, line, "route_id")?;
            if !route.is_empty() {
                routes[cell] = Some(route.to_owned());
            }
        }
    }
    let layer = ResourceLayer::new(resource, values)?;
    match routes {
        Some(r) => layer.with_route_ids(r),
        None => Ok(layer),
    }
}

pub fn write_layer(layer: &ResourceLayer, world: &World) -> String {
    let routes = layer.route_ids();
    let mut out = header(if routes.is_some() {
        LAYER_ROUTE_HEADER
    } else {
        LAYER_HEADER
    });
    for cell in by_cell_id(world.cell_ids()) {
        let v = layer.values()[cell];
        let route = routes.and_then(|r| r[cell].as_deref());
        if v == 0.0 && route.is_none() {
            continue;
        }
        let id = world.cell_id(cell);
        let r = layer.resource();
        match routes {
            Some(_) => csv_row(&mut out, &[&id, &r, &v, &route.unwrap_or("")]),
            None => csv_row(&mut out, &[&id, &r, &v]),
        }
    }
    out
}

/// Plain-text P2 raster, one class value per cell in row-major order.
pub fn render_pgm(rows: usize, cols: usize, classes: &ConflictClassField) -> String {
    let mut out = format!("P2\n{cols} {rows}\n{}\n", classes.class_count - 1);
    for r in 0..rows {
        let line: Vec<String> = classes.classes[r * cols..(r + 1) * cols]
            .iter()
            .map(|c| c.to_string())
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ResultSummary {
    rows: usize,
    cols: usize,
    grade_count: usize,
    class_count: usize,
    class_counts: Vec<usize>,
}

/// Serialized form of a [`RunResult`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultFiles {
    pub classes_csv: String,
    pub forecasts_csv: String,
    pub hotspots_csv: String,
    pub summary_toml: String,
    pub raster_pgm: String,
}

impl ResultFiles {
    pub const CLASSES: &'static str = "classes.csv";
    pub const FORECASTS: &'static str = "forecasts.csv";
    pub const HOTSPOTS: &'static str = "hotspots.csv";
    pub const SUMMARY: &'static str = "summary.toml";
    pub const RASTER: &'static str = "classes.pgm";

    fn entries(&self) -> [(&'static str, &String); 5] {
        [
            (Self::CLASSES, &self.classes_csv),
            (Self::FORECASTS, &self.forecasts_csv),
            (Self::HOTSPOTS, &self.hotspots_csv),
            (Self::SUMMARY, &self.summary_toml),
            (Self::RASTER, &self.raster_pgm),
        ]
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_owned(),
            source,
        })?;
        for (name, text) in self.entries() {
            write_file(&dir.join(name), text)?;
        }
        Ok(())
    }

    pub fn read_dir(dir: &Path) -> Result<Self> {
        Ok(Self {
            classes_csv: read_file(&dir.join(Self::CLASSES))?,
            forecasts_csv: read_file(&dir.join(Self::FORECASTS))?,
            hotspots_csv: read_file(&dir.join(Self::HOTSPOTS))?,
            summary_toml: read_file(&dir.join(Self::SUMMARY))?,
            raster_pgm: read_file(&dir.join(Self::RASTER))?,
        })
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn vector_text(v: &SortedGradeVector) -> String {
    v.grades()
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_result(result: &RunResult) -> ResultFiles {
    let order = by_cell_id(&result.cell_ids);

    let mut classes_csv = header(CLASSES_HEADER);
    for &cell in &order {
        let (row, col) = result.row_col(cell);
        csv_row(
            &mut classes_csv,
            &[
                &result.cell_ids[cell],
                &row,
                &col,
                &result.overall.classes[cell],
            ],
        );
    }

    let mut forecasts_csv = header(FORECASTS_HEADER);
    for &cell in &order {
        let mut line = result.cell_ids[cell].to_string();
        for r in Resource::ALL {
            let g = result.forecast(r).map_or(0, |f| f.grades[cell]);
            write!(line, ",{g}").expect("writing to a String");
        }
        forecasts_csv.push_str(&line);
        forecasts_csv.push('\n');
    }

    let mut hotspots_csv = header(HOTSPOTS_HEADER);
    for (rank, h) in result.hotspots.iter().enumerate() {
        let (row, col) = result.row_col(h.cell);
        csv_row(
            &mut hotspots_csv,
            &[
                &(rank + 1),
                &h.cell_id,
                &row,
                &col,
                &h.class,
                &vector_text(&h.vector),
            ],
        );
    }

    let summary = ResultSummary {
        rows: result.rows,
        cols: result.cols,
        grade_count: result.grade_count,
        class_count: result.overall.class_count,
        class_counts: result.class_counts.clone(),
    };
    ResultFiles {
        classes_csv,
        forecasts_csv,
        hotspots_csv,
        summary_toml: toml::to_string(&summary).expect("summary serializes"),
        raster_pgm: render_pgm(result.rows, result.cols, &result.overall),
    }
}

/// Rebuilds a [`RunResult`] from its files. The raster is derived data and
/// is not read.
pub fn parse_result(files: &ResultFiles) -> Result<RunResult> {
    let summary: ResultSummary = toml::from_str(&files.summary_toml).map_err(|e| Error::Input {
        file: ResultFiles::SUMMARY.into(),
        message: e.to_string(),
    })?;
    let (rows, cols) = (summary.rows, summary.cols);
    let cells = rows * cols;
    if summary.class_count < 2 || summary.class_counts.len() != summary.class_count {
        return Err(Error::Input {
            file: ResultFiles::SUMMARY.into(),
            message: format!(
                "class_counts has {} entries for {} classes",
                summary.class_counts.len(),
                summary.class_count
            ),
        });
    }

    let t = Table::parse(ResultFiles::CLASSES, &files.classes_csv, &[CLASSES_HEADER])?;
    if t.rows.len() != cells {
        return Err(Error::Input {
            file: ResultFiles::CLASSES.into(),
            message: format!("{} rows for a {rows}x{cols} grid", t.rows.len()),
        });
    }
    let mut cell_ids: Vec<Option<CellId>> = vec![None; cells];
    let mut classes = vec![0u8; cells];
    let mut index: HashMap<CellId, usize> = HashMap::new();
    for (line, rec) in &t.rows {
        let line = *line;
        let id: CellId = t.value(rec, line, "cell_id")?;
        let row: usize = t.value(rec, line, "row")?;
        let col: usize = t.value(rec, line, "col")?;
        if row >= rows || col >= cols {
            return Err(t.err(line, "row", format!("({row}, {col}) outside {rows}x{cols}")));
        }
        let cell = row * cols + col;
        if cell_ids[cell].is_some() || index.insert(id, cell).is_some() {
            return Err(t.err(line, "cell_id", format!("duplicate cell {id}")));
        }
        let class: u8 = t.value(rec, line, "class")?;
        if class as usize >= summary.class_count {
            return Err(t.err(
                line,
                "class",
                format!("{class} outside 0..{}", summary.class_count),
            ));
        }
        cell_ids[cell] = Some(id);
        classes[cell] = class;
    }
    let cell_ids: Vec<CellId> = cell_ids.into_iter().flatten().collect();
    let overall = ConflictClassField {
        class_count: summary.class_count,
        classes,
    };
    if overall.counts() != summary.class_counts {
        return Err(Error::Input {
            file: ResultFiles::SUMMARY.into(),
            message: "class_counts disagree with classes.csv".into(),
        });
    }
    let lookup = |t: &Table, line: u64, rec: &StringRecord| -> Result<usize> {
        let id: CellId = t.value(rec, line, "cell_id")?;
        index
            .get(&id)
            .copied()
            .ok_or_else(|| t.err(line, "cell_id", format!("unknown cell id {id}")))
    };

    let t = Table::parse(
        ResultFiles::FORECASTS,
        &files.forecasts_csv,
        &[FORECASTS_HEADER],
    )?;
    let mut forecasts: Vec<GradeField> = Resource::ALL
        .iter()
        .map(|&resource| GradeField {
            country: None,
            resource,
            levels: summary.grade_count,
            grades: vec![0; cells],
        })
        .collect();
    for (line, rec) in &t.rows {
        let cell = lookup(&t, *line, rec)?;
        for f in forecasts.iter_mut() {
            let g: u8 = t.value(rec, *line, f.resource.as_str())?;
            if g as usize >= summary.grade_count {
                return Err(t.err(
                    *line,
                    f.resource.as_str(),
                    format!("grade {g} outside the scale"),
                ));
            }
            f.grades[cell] = g;
        }
    }

    let t = Table::parse(
        ResultFiles::HOTSPOTS,
        &files.hotspots_csv,
        &[HOTSPOTS_HEADER],
    )?;
    let mut hotspots = Vec::with_capacity(t.rows.len());
    for (line, rec) in &t.rows {
        let line = *line;
        let cell = lookup(&t, line, rec)?;
        let grades = t
            .get(rec, line, "vector")?
            .split_whitespace()
            .map(|g| g.parse::<u8>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| t.err(line, "vector", e.to_string()))?;
        let vector =
            SortedGradeVector::new(grades).map_err(|e| t.err(line, "vector", e.to_string()))?;
        hotspots.push(Hotspot {
            cell,
            cell_id: cell_ids[cell],
            vector,
            class: t.value(rec, line, "class")?,
        });
    }

    Ok(RunResult {
        rows,
        cols,
        cell_ids,
        grade_count: summary.grade_count,
        forecasts,
        class_counts: summary.class_counts,
        overall,
        hotspots,
    })
}

/// Per-zone comparison table.
pub fn write_comparison(cmp: &RunComparison) -> String {
    let mut out = header(&[
        "zone",
        "cells",
        "upgraded",
        "downgraded",
        "unchanged",
        "net",
    ]);
    let rows = std::iter::once(("TOTAL".to_owned(), &cmp.total))
        .chain(cmp.zones.iter().map(|(z, c)| (z.label(), c)));
    for (label, c) in rows {
        csv_row(
            &mut out,
            &[
                &label,
                &c.cells,
                &c.upgraded,
                &c.downgraded,
                &c.unchanged,
                &c.net,
            ],
        );
    }
    out
}

pub fn write_deltas(result: &RunResult, cmp: &RunComparison) -> String {
    let mut out = header(&["cell_id", "row", "col", "delta"]);
    for cell in by_cell_id(&result.cell_ids) {
        let (row, col) = result.row_col(cell);
        csv_row(
            &mut out,
            &[&result.cell_ids[cell], &row, &col, &cmp.deltas[cell]],
        );
    }
    out
}

pub fn write_sweep_summary(rows: &[SweepRow]) -> String {
    let mut out = header(&[
        "alpha",
        "top_class",
        "top_cells",
        "top_in_eez",
        "eez_share",
        "class_counts",
    ]);
    for r in rows {
        let top = r.share.class.map_or_else(String::new, |c| c.to_string());
        let counts = r
            .class_counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        csv_row(
            &mut out,
            &[
                &r.alpha,
                &top,
                &r.share.cells,
                &r.share.in_eez,
                &r.share.eez_fraction(),
                &counts,
            ],
        );
    }
    out
}

/// GeoJSON points at cell centers with class and owner properties.
pub fn write_geojson(world: &World, result: &RunResult) -> String {
    let features: Vec<serde_json::Value> = by_cell_id(world.cell_ids())
        .into_iter()
        .map(|cell| {
            let c = world.grid().center(cell);
            let owner = world
                .owner(cell)
                .code()
                .map_or(INTERNATIONAL, |c| c.as_str());
            serde_json::json!({
                "type": "Feature",
                "geometry": { "type": "Point", "coordinates": [c.lon, c.lat] },
                "properties": {
                    "cell_id": world.cell_id(cell).to_string(),
                    "class": result.overall.classes[cell],
                    "owner": owner,
                },
            })
        })
        .collect();
    let doc = serde_json::json!({ "type": "FeatureCollection", "features": features });
    let mut s = serde_json::to_string_pretty(&doc).expect("json serializes");
    s.push('\n');
    s
}

/// Reads a world, its countries and whichever layer files are given.
pub fn load_inputs(
    countries_path: &Path,
    world_path: &Path,
    layer_paths: &BTreeMap<Resource, std::path::PathBuf>,
) -> Result<(World, crate::scenario::LayerSet)> {
    let name = |p: &Path| p.display().to_string();
    let countries = parse_countries(&name(countries_path), &read_file(countries_path)?)?;
    let world = parse_world(&name(world_path), &read_file(world_path)?, &countries)?;
    let mut layers = crate::scenario::LayerSet::new();
    for (&r, p) in layer_paths {
        layers.insert(parse_layer(&name(p), &read_file(p)?, &world, r)?);
    }
    Ok((world, layers))
}
