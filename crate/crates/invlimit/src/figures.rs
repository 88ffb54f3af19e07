//! Figure series: the graph of the map, the line and arc layouts and the
//! model charts, as labeled polylines and markers with CSV and SVG writers.

use std::fmt::Write as _;

use crate::codes::Family;
use crate::embedding::{BrickEntry, Embedding, ExtendedCoord, Sheet};
use crate::error::{Error, Result};
use crate::map_family::{CaseLabel, UnimodalMap};

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub label: String,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub label: String,
    pub point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSeries {
    pub figure_id: u8,
    /// 2 or 3.
    pub dims: usize,
    pub polylines: Vec<Polyline>,
    pub markers: Vec<Marker>,
}

/// Ids accepted by [`figure`].
pub const FIGURE_IDS: std::ops::RangeInclusive<u8> = 1..=9;

fn mismatch(required: &'static str, map: &UnimodalMap) -> Error {
    Error::WrongCase { required, found: map.case() }
}

/// Builds figure `id` for `map` with `samples` points per sampled curve.
pub fn figure(map: &UnimodalMap, id: u8, samples: usize) -> Result<FigureSeries> {
    let samples = samples.max(2);
    let case = map.case();
    match id {
        1 => Ok(graph_figure(map, 1, samples)),
        4 if case.is_case3() => Ok(graph_figure(map, 4, samples)),
        4 => Err(mismatch("case 3", map)),
        2 if matches!(case, CaseLabel::Case1 | CaseLabel::Case2) => line_layout(&Embedding::new(map)?),
        2 => Err(mismatch("case 1 or 2", map)),
        3 if case == CaseLabel::Case2 => model_figure(&Embedding::new(map)?, 3, samples),
        3 => Err(mismatch("case 2", map)),
        5 if case.is_case3() => cluster_layout(&Embedding::new(map)?),
        6 if case.is_case3() => arc_layout(&Embedding::new(map)?),
        5 | 6 => Err(mismatch("case 3", map)),
        7 if case == CaseLabel::Case3a => model_figure(&Embedding::new(map)?, 7, samples),
        7 => Err(mismatch("case 3a", map)),
        8 if case == CaseLabel::Case3b => arc_plane_figure(&Embedding::new(map)?, samples),
        9 if case == CaseLabel::Case3b => model_figure(&Embedding::new(map)?, 9, samples),
        8 | 9 => Err(mismatch("case 3b", map)),
        _ => Err(Error::Parse(format!("no figure {id}; expected 1 to 9"))),
    }
}

fn p2(x: f64, y: f64) -> Vec<f64> {
    vec![x, y]
}

fn marker(label: impl Into<String>, point: Vec<f64>) -> Marker {
    Marker { label: label.into(), point }
}

fn graph_figure(map: &UnimodalMap, id: u8, samples: usize) -> FigureSeries {
    let graph = (0..samples)
        .map(|j| {
            let x = j as f64 / (samples - 1) as f64;
            p2(x, map.eval(x))
        })
        .collect();
    let l = map.landmarks();
    let mut polylines = vec![
        Polyline { label: "f".into(), points: graph },
        Polyline { label: "diagonal".into(), points: vec![p2(0.0, 0.0), p2(1.0, 1.0)] },
    ];
    let mut markers = vec![
        marker("0", p2(0.0, 0.0)),
        marker("ρ", p2(map.rho, 0.0)),
        marker("1", p2(1.0, 0.0)),
        marker("1", p2(0.0, 1.0)),
        marker("ρ1", p2(0.0, map.rho1)),
        marker("ω0", p2(l.omega0, 0.0)),
    ];
    if id == 4 {
        markers.push(marker("ρ", p2(0.0, map.rho)));
        markers.push(marker("f(ρ1)", p2(0.0, l.f_rho1)));
        if let (Some(w1), Some(w2)) = (l.w1, l.w2) {
            markers.push(marker("w1", p2(w1, 0.0)));
            markers.push(marker("w2", p2(w2, 0.0)));
            polylines.push(Polyline {
                label: "cycle".into(),
                points: vec![p2(w1, w1), p2(w1, w2), p2(w2, w2), p2(w2, w1), p2(w1, w1)],
            });
        }
    }
    FigureSeries { figure_id: id, dims: 2, polylines, markers }
}

/// Brick segments on the horizontal axis, upper end first.
fn segments(table: &[BrickEntry]) -> Vec<Polyline> {
    table
        .iter()
        .map(|e| {
            let im = e.image();
            let name = e.code.family().map_or_else(|| e.code.to_string(), |f| f.to_string());
            Polyline { label: name, points: vec![p2(im.hi, 0.0), p2(im.lo, 0.0)] }
        })
        .collect()
}

/// `−c0 d0 − c1 d1 − …` style label for a sum of brick lengths.
fn length_sum_label(counts: &[usize], negative: bool) -> String {
    let mut out = String::new();
    for (j, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        out.push(if negative {
            '-'
        } else if out.is_empty() {
            '\0'
        } else {
            '+'
        });
        if c > 1 {
            write!(out, "{c}").unwrap();
        }
        write!(out, "d{j}").unwrap();
    }
    out.retain(|ch| ch != '\0');
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn line_layout(e: &Embedding) -> Result<FigureSeries> {
    let map = e.map();
    let table = e.line_table();
    let mut markers = vec![marker("1", p2(1.0, 0.0))];
    for (n, entry) in table.iter().enumerate() {
        let lo = entry.image().lo;
        let label = match (map.case(), n) {
            (_, 0) => "0".to_string(),
            (CaseLabel::Case2, 1) => "-ρ".into(),
            (CaseLabel::Case2, _) => format!("-{n}ρ"),
            (_, 1) => "-ρ1".into(),
            (_, 2) => "-2ρ1+f^2(0)".into(),
            _ => format!("a_{n}"),
        };
        markers.push(marker(label, p2(lo, 0.0)));
    }
    let mut polylines = segments(table);
    if let Some(a) = e.line_end() {
        markers.push(marker("a", p2(a, 0.0)));
        let last = table.last().map_or(0.0, |t| t.image().lo);
        polylines.push(Polyline { label: "tail".into(), points: vec![p2(last, 0.0), p2(a, 0.0)] });
    }
    Ok(FigureSeries { figure_id: 2, dims: 2, polylines, markers })
}

fn cluster_layout(e: &Embedding) -> Result<FigureSeries> {
    let table = e.line_table();
    let mut counts = vec![0usize; e.d_values().len()];
    let mut markers = vec![marker("1", p2(1.0, 0.0))];
    for (m, entry) in table.iter().enumerate() {
        if m > 0 {
            counts[entry.length_index] += 1;
        }
        markers.push(marker(length_sum_label(&counts, true), p2(entry.image().lo, 0.0)));
    }
    Ok(FigureSeries { figure_id: 5, dims: 2, polylines: segments(table), markers })
}

/// Arc bricks ordered left to right.
fn arc_left_to_right(e: &Embedding) -> Vec<&BrickEntry> {
    let mut arc: Vec<&BrickEntry> = e.arc_table().iter().collect();
    arc.sort_by(|a, b| a.image().lo.total_cmp(&b.image().lo));
    arc
}

fn arc_layout(e: &Embedding) -> Result<FigureSeries> {
    let arc = arc_left_to_right(e);
    let mut polylines = Vec::with_capacity(arc.len());
    let mut markers = Vec::new();
    let n = e.d_values().len();
    let (mut left, mut right) = (vec![0usize; n], vec![0usize; n]);
    right[0] = 1;
    markers.push(marker("0", p2(0.0, 0.0)));
    markers.push(marker("d0", p2(e.arc_table()[0].image().hi, 0.0)));
    for entry in e.arc_table().iter().skip(1) {
        let im = entry.image();
        match entry.code.family() {
            Some(Family::Tk { i: 1, .. }) => {
                left[entry.length_index] += 1;
                markers.push(marker(length_sum_label(&left, true), p2(im.lo, 0.0)));
            }
            _ => {
                right[entry.length_index] += 1;
                markers.push(marker(length_sum_label(&right, false), p2(im.hi, 0.0)));
            }
        }
    }
    for entry in arc {
        let im = entry.image();
        let name = entry.code.family().map_or_else(|| entry.code.to_string(), |f| f.to_string());
        polylines.push(Polyline {
            label: format!("{name} d{}", entry.length_index),
            points: vec![p2(im.lo, 0.0), p2(im.hi, 0.0)],
        });
    }
    if let Some((a, b)) = e.arc_ends() {
        markers.push(marker("a∞", p2(a, 0.0)));
        markers.push(marker("b∞", p2(b, 0.0)));
    }
    Ok(FigureSeries { figure_id: 6, dims: 2, polylines, markers })
}

/// Model coordinates of `c`, padded to `dims`.
fn model_point(e: &Embedding, c: ExtendedCoord, dims: usize) -> Result<Vec<f64>> {
    let mut v = e.model_coordinates(c)?;
    v.resize(dims, 0.0);
    Ok(v)
}

/// Samples a sheet interval through the model chart, `per` points per table brick.
fn chart_through(e: &Embedding, sheet: Sheet, table: &[&BrickEntry], per: usize, dims: usize) -> Result<Vec<Vec<f64>>> {
    let mut pts = Vec::new();
    for entry in table {
        let im = entry.image();
        for j in 0..per {
            let y = im.hi - (im.hi - im.lo) * j as f64 / (per - 1) as f64;
            pts.push(model_point(e, ExtendedCoord::on(sheet, y), dims)?);
        }
    }
    Ok(pts)
}

fn model_figure(e: &Embedding, id: u8, samples: usize) -> Result<FigureSeries> {
    let map = e.map();
    let dims = if id == 9 { 3 } else { 2 };
    let line: Vec<&BrickEntry> = e.line_table().iter().collect();
    let per = (samples / line.len()).max(2);
    let mut polylines =
        vec![Polyline { label: "ray".into(), points: chart_through(e, Sheet::Line, &line, per, dims)? }];
    let mut arc = arc_left_to_right(e);
    if id == 7 {
        arc.retain(|b| b.image().width() > 1e-12);
    }
    polylines.push(Polyline { label: "arc".into(), points: chart_through(e, Sheet::ArcInf, &arc, per, dims)? });
    let at = |sheet: Sheet, v: f64| model_point(e, ExtendedCoord::on(sheet, v), dims);
    let mut markers = vec![marker("1", at(Sheet::Line, 1.0)?), marker("0", at(Sheet::Line, 0.0)?)];
    match id {
        3 => {
            for n in 1..=4 {
                let label = if n == 1 { "-ρ".to_string() } else { format!("-{n}ρ") };
                markers.push(marker(label, at(Sheet::Line, -(n as f64) * map.rho)?));
            }
            markers.push(marker("(0,∞)", at(Sheet::ArcInf, 0.0)?));
            markers.push(marker("(ρ,∞)", at(Sheet::ArcInf, map.rho)?));
        }
        7 => {
            let layout = cluster_layout(e)?;
            for m in layout.markers.into_iter().skip(2).take(13) {
                markers.push(marker(m.label, at(Sheet::Line, m.point[0])?));
            }
            let (a, b) = e.arc_ends().expect("case 3a has arc ends");
            markers.push(marker("(a∞,∞)", at(Sheet::ArcInf, a)?));
            markers.push(marker("(b∞,∞)", at(Sheet::ArcInf, b)?));
            for entry in e.arc_table().iter().take(7) {
                let im = entry.image();
                markers.push(marker(format!("d{}", entry.length_index), at(Sheet::ArcInf, 0.5 * (im.lo + im.hi))?));
            }
        }
        _ => {
            let d1 = e.d_values()[1];
            for (sheet, lo, hi) in [(Sheet::ArcMinusInf, 0.0, d1), (Sheet::ArcPlusInf, map.rho, map.rho1)] {
                let pts = (0..per)
                    .map(|j| at(sheet, lo + (hi - lo) * j as f64 / (per - 1) as f64))
                    .collect::<Result<Vec<_>>>()?;
                polylines.push(Polyline { label: sheet.name().into(), points: pts });
            }
            markers.push(marker("(0,-∞)", at(Sheet::ArcMinusInf, 0.0)?));
            markers.push(marker("(d1,-∞)", at(Sheet::ArcMinusInf, d1)?));
            markers.push(marker("(ρ,+∞)", at(Sheet::ArcPlusInf, map.rho)?));
            markers.push(marker("(ρ1,+∞)", at(Sheet::ArcPlusInf, map.rho1)?));
            markers.push(marker("(0,∞)", at(Sheet::ArcInf, 0.0)?));
            markers.push(marker("(ρ,∞)", at(Sheet::ArcInf, map.rho)?));
            markers.push(marker("(ρ1,∞)", at(Sheet::ArcInf, map.rho1)?));
        }
    }
    Ok(FigureSeries { figure_id: id, dims, polylines, markers })
}

/// The arc part of the case-3b model projected to the plane.
fn arc_plane_figure(e: &Embedding, samples: usize) -> Result<FigureSeries> {
    let full = model_figure(e, 9, samples)?;
    let flat = |p: &Vec<f64>| p2(p[0], p[1]);
    let polylines = full
        .polylines
        .iter()
        .filter(|l| l.label != "ray")
        .map(|l| Polyline { label: l.label.clone(), points: l.points.iter().map(flat).collect() })
        .collect();
    let map = e.map();
    let d = e.d_values();
    let at =
        |sheet: Sheet, v: f64| -> Result<Vec<f64>> { Ok(flat(&e.model_coordinates(ExtendedCoord::on(sheet, v))?)) };
    let mut markers = vec![marker("0", at(Sheet::ArcInf, 0.0)?), marker("ρ", at(Sheet::ArcInf, map.rho)?)];
    for k in 1..=3 {
        let label = if k == 1 { "-d1".to_string() } else { format!("-{k}d1") };
        markers.push(marker(label, at(Sheet::ArcInf, -(k as f64) * d[1])?));
    }
    markers.push(marker("ρ1=ρ+d2", at(Sheet::ArcInf, map.rho1)?));
    for k in 2..=3 {
        markers.push(marker(format!("ρ+{k}d2"), at(Sheet::ArcInf, map.rho + k as f64 * d[2])?));
    }
    markers.push(marker("(0,-∞)", at(Sheet::ArcMinusInf, 0.0)?));
    markers.push(marker("(f(ρ1),-∞)", at(Sheet::ArcMinusInf, d[1])?));
    markers.push(marker("(ρ,+∞)", at(Sheet::ArcPlusInf, map.rho)?));
    markers.push(marker("(ρ1,+∞)", at(Sheet::ArcPlusInf, map.rho1)?));
    Ok(FigureSeries { figure_id: 8, dims: 2, polylines, markers })
}

fn csv_label(label: &str) -> String {
    format!("\"{}\"", label.replace('"', "\"\""))
}

fn csv_coords(p: &[f64], dims: usize) -> String {
    let cell = |j: usize| if j < dims { format!("{:.16e}", p[j]) } else { String::new() };
    (0..3).map(cell).collect::<Vec<_>>().join(",")
}

impl FigureSeries {
    /// Columns: figure, kind, label, index, x, y, z (z empty in 2D).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("figure,kind,label,index,x,y,z\n");
        for l in &self.polylines {
            for (j, p) in l.points.iter().enumerate() {
                writeln!(out, "{},polyline,{},{j},{}", self.figure_id, csv_label(&l.label), csv_coords(p, self.dims))
                    .unwrap();
            }
        }
        for m in &self.markers {
            writeln!(out, "{},marker,{},0,{}", self.figure_id, csv_label(&m.label), csv_coords(&m.point, self.dims))
                .unwrap();
        }
        out
    }

    /// SVG drawing; 3D series get two panels, the Oxy and Ozx projections.
    pub fn to_svg(&self) -> String {
        let panels: Vec<(usize, usize, &str)> =
            if self.dims == 3 { vec![(0, 1, "Oxy"), (0, 2, "Ozx")] } else { vec![(0, 1, "")] };
        let (w, h) = (640.0, 480.0);
        let total_w = w * panels.len() as f64;
        let mut out = String::new();
        writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total_w}\" height=\"{h}\" viewBox=\"0 0 {total_w} {h}\">"
        )
        .unwrap();
        writeln!(out, "<rect width=\"{total_w}\" height=\"{h}\" fill=\"white\"/>").unwrap();
        for (k, &(ax, ay, title)) in panels.iter().enumerate() {
            let all = self.polylines.iter().flat_map(|l| l.points.iter()).chain(self.markers.iter().map(|m| &m.point));
            let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
            for p in all {
                x0 = x0.min(p[ax]);
                x1 = x1.max(p[ax]);
                y0 = y0.min(p[ay]);
                y1 = y1.max(p[ay]);
            }
            let (sx, sy) = ((x1 - x0).max(1e-12), (y1 - y0).max(1e-12));
            let margin = 40.0;
            let off = k as f64 * w;
            let tx = |x: f64| off + margin + (x - x0) / sx * (w - 2.0 * margin);
            let ty = |y: f64| h - margin - (y - y0) / sy * (h - 2.0 * margin);
            if !title.is_empty() {
                writeln!(out, "<text x=\"{:.2}\" y=\"20\" font-size=\"14\">{title}</text>", off + margin).unwrap();
            }
            for l in &self.polylines {
                let pts: Vec<String> = l.points.iter().map(|p| format!("{:.2},{:.2}", tx(p[ax]), ty(p[ay]))).collect();
                writeln!(
                    out,
                    "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"{}\"><title>{}</title></polyline>",
                    pts.join(" "),
                    xml_escape(&l.label)
                )
                .unwrap();
            }
            for m in &self.markers {
                let (px, py) = (tx(m.point[ax]), ty(m.point[ay]));
                writeln!(out, "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"2.5\" fill=\"black\"/>").unwrap();
                writeln!(
                    out,
                    "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\">{}</text>",
                    px + 3.0,
                    py - 3.0,
                    xml_escape(&m.label)
                )
                .unwrap();
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_family::presets;

    #[test]
    fn case_requirements() {
        let m = presets::case1();
        match figure(&m, 3, 10) {
            Err(Error::WrongCase { required, .. }) => assert_eq!(required, "case 2"),
            other => panic!("{other:?}"),
        }
        assert!(figure(&m, 1, 10).is_ok() && figure(&m, 2, 10).is_ok());
        assert!(figure(&presets::case3a(), 8, 10).is_err());
        assert!(figure(&m, 10, 10).is_err());
    }

    #[test]
    fn line_layout_breakpoints() {
        let m = presets::case1();
        let f = figure(&m, 2, 10).unwrap();
        let labels: Vec<(&str, f64)> = f.markers.iter().map(|mk| (mk.label.as_str(), mk.point[0])).collect();
        assert_eq!(labels[0], ("1", 1.0));
        assert_eq!(labels[1], ("0", 0.0));
        assert_eq!(labels[2], ("-ρ1", -m.rho1));
        assert!((labels[3].1 - (-2.0 * m.rho1 + m.iterate(0.0, 2))).abs() < 1e-15);
        assert!(labels.iter().any(|(l, _)| *l == "a"));
    }

    #[test]
    fn cluster_labels_follow_lengths() {
        let f = figure(&presets::case3a(), 5, 10).unwrap();
        let labels: Vec<&str> = f.markers.iter().map(|m| m.label.as_str()).collect();
        assert_eq!(
            &labels[..10],
            &[
                "1",
                "0",
                "-d0",
                "-2d0",
                "-2d0-d1",
                "-2d0-2d1",
                "-3d0-2d1",
                "-3d0-2d1-d2",
                "-3d0-2d1-2d2",
                "-4d0-2d1-2d2"
            ]
        );
    }

    #[test]
    fn arc_layout_order() {
        let f = figure(&presets::case3a(), 6, 10).unwrap();
        let names: Vec<&str> = f.polylines.iter().map(|l| l.label.rsplit(' ').next().unwrap()).collect();
        let mid = names.iter().position(|&n| n == "d0").unwrap();
        assert_eq!(&names[mid - 2..=mid + 2], &["d3", "d1", "d0", "d2", "d4"]);
    }

    #[test]
    fn csv_and_svg_are_stable() {
        let m = presets::case3b();
        let f = figure(&m, 9, 200).unwrap();
        assert_eq!(f.to_csv(), figure(&m, 9, 200).unwrap().to_csv());
        assert!(f.to_svg().contains("Ozx"));
        assert!(f.to_csv().lines().nth(1).unwrap().starts_with("9,polyline,\"ray\",0,"));
    }
}
