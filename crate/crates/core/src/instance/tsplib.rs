//! TSPLIB95 reader/writer with the priority extension.
//!
//! Supported weights: `EUC_2D` coordinates and `EXPLICIT` matrices in
//! `FULL_MATRIX`, `UPPER_ROW`, `LOWER_ROW`, `UPPER_DIAG_ROW` and
//! `LOWER_DIAG_ROW` layout. The extension adds three entries:
//!
//! ```text
//! GROUPS : 3
//! DRELAX : 1
//! PRIORITY_SECTION
//! 2 1
//! 3 3
//! ...
//! ```
//!
//! `PRIORITY_SECTION` lists `node_id priority` for every non-depot node
//! (1-based ids, depot is node 1). A `TIME_SECTION` full matrix is written
//! only when travel times differ from costs.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{euc_2d, Instance, Matrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WeightFormat {
    Full,
    UpperRow,
    LowerRow,
    UpperDiagRow,
    LowerDiagRow,
}

impl WeightFormat {
    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "FULL_MATRIX" => WeightFormat::Full,
            "UPPER_ROW" => WeightFormat::UpperRow,
            "LOWER_ROW" => WeightFormat::LowerRow,
            "UPPER_DIAG_ROW" => WeightFormat::UpperDiagRow,
            "LOWER_DIAG_ROW" => WeightFormat::LowerDiagRow,
            other => {
                return Err(Error::UnsupportedWeights(format!(
                    "EDGE_WEIGHT_FORMAT {other}"
                )))
            }
        })
    }

    fn expected_len(self, n: usize) -> usize {
        match self {
            WeightFormat::Full => n * n,
            WeightFormat::UpperRow | WeightFormat::LowerRow => n * (n - 1) / 2,
            WeightFormat::UpperDiagRow | WeightFormat::LowerDiagRow => n * (n + 1) / 2,
        }
    }

    fn fill(self, n: usize, values: &[i64]) -> Matrix {
        let mut m = Matrix::zeros(n);
        let mut it = values.iter().copied();
        let mut put = |i: usize, j: usize, v: i64| {
            m.set(i, j, v);
            m.set(j, i, v);
        };
        match self {
            WeightFormat::Full => {
                let mut m = Matrix::zeros(n);
                for i in 0..n {
                    for j in 0..n {
                        m.set(i, j, it.next().unwrap());
                    }
                }
                return m;
            }
            WeightFormat::UpperRow => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        put(i, j, it.next().unwrap());
                    }
                }
            }
            WeightFormat::LowerRow => {
                for i in 0..n {
                    for j in 0..i {
                        put(i, j, it.next().unwrap());
                    }
                }
            }
            WeightFormat::UpperDiagRow => {
                for i in 0..n {
                    for j in i..n {
                        put(i, j, it.next().unwrap());
                    }
                }
            }
            WeightFormat::LowerDiagRow => {
                for i in 0..n {
                    for j in 0..=i {
                        put(i, j, it.next().unwrap());
                    }
                }
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Coords,
    Display,
    Weights,
    Time,
    Priority,
    Skip,
}

/// Parsed fields before validation.
#[derive(Default)]
struct Raw {
    name: Option<String>,
    dimension: Option<usize>,
    weight_type: Option<String>,
    weight_format: Option<String>,
    groups: Option<u32>,
    relax: Option<u32>,
    coords: HashMap<usize, (f64, f64)>,
    display: HashMap<usize, (f64, f64)>,
    weights: Vec<i64>,
    times: Vec<i64>,
    priority: Option<Vec<(usize, i64, usize)>>,
}

fn section_of(key: &str) -> Option<Section> {
    Some(match key {
        "NODE_COORD_SECTION" => Section::Coords,
        "DISPLAY_DATA_SECTION" => Section::Display,
        "EDGE_WEIGHT_SECTION" => Section::Weights,
        "TIME_SECTION" => Section::Time,
        "PRIORITY_SECTION" => Section::Priority,
        "DEMAND_SECTION" | "DEPOT_SECTION" | "FIXED_EDGES_SECTION" | "TOUR_SECTION" => {
            Section::Skip
        }
        _ => return None,
    })
}

fn parse_raw(text: &str) -> Result<Raw> {
    let mut raw = Raw::default();
    let mut section: Option<Section> = None;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        let starts_alpha = line.chars().next().is_some_and(|c| c.is_ascii_alphabetic());
        if starts_alpha {
            let (key, value) = match line.split_once(':') {
                Some((k, v)) => (k.trim(), Some(v.trim())),
                None => (line.split_whitespace().next().unwrap_or(line), None),
            };
            if let Some(s) = section_of(key) {
                section = Some(s);
                if s == Section::Priority {
                    raw.priority.get_or_insert_with(Vec::new);
                }
                continue;
            }
            section = None;
            let value = value.unwrap_or("").to_string();
            let num = |v: &str| -> Result<u64> {
                v.parse::<u64>().map_err(|_| {
                    Error::parse(lineno, format!("expected integer for {key}, got '{v}'"))
                })
            };
            match key {
                "NAME" => raw.name = Some(value),
                "DIMENSION" => raw.dimension = Some(num(&value)? as usize),
                "EDGE_WEIGHT_TYPE" => raw.weight_type = Some(value),
                "EDGE_WEIGHT_FORMAT" => raw.weight_format = Some(value),
                "GROUPS" => raw.groups = Some(num(&value)? as u32),
                "DRELAX" => raw.relax = Some(num(&value)? as u32),
                "TYPE" | "COMMENT" | "NODE_COORD_TYPE" | "DISPLAY_DATA_TYPE" | "CAPACITY" => {}
                other => return Err(Error::parse(lineno, format!("unknown keyword '{other}'"))),
            }
            continue;
        }

        let Some(sec) = section else {
            return Err(Error::parse(lineno, "data outside of a section"));
        };
        let mut toks = line.split_whitespace();
        match sec {
            Section::Coords | Section::Display => {
                let (id, x, y) = (toks.next(), toks.next(), toks.next());
                let (Some(id), Some(x), Some(y)) = (id, x, y) else {
                    return Err(Error::parse(lineno, "coordinate line needs 'id x y'"));
                };
                let id: usize = id
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad node id '{id}'")))?;
                let x: f64 = x
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad coordinate '{x}'")))?;
                let y: f64 = y
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad coordinate '{y}'")))?;
                let target = if sec == Section::Coords {
                    &mut raw.coords
                } else {
                    &mut raw.display
                };
                if target.insert(id, (x, y)).is_some() {
                    return Err(Error::parse(lineno, format!("duplicate node {id}")));
                }
            }
            Section::Weights | Section::Time => {
                for t in toks {
                    let v = parse_weight(t)
                        .ok_or_else(|| Error::parse(lineno, format!("bad weight '{t}'")))?;
                    if sec == Section::Weights {
                        raw.weights.push(v);
                    } else {
                        raw.times.push(v);
                    }
                }
            }
            Section::Priority => {
                let (Some(id), Some(p)) = (toks.next(), toks.next()) else {
                    return Err(Error::parse(lineno, "priority line needs 'id priority'"));
                };
                let id: usize = id
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad node id '{id}'")))?;
                let p: i64 = p
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad priority '{p}'")))?;
                raw.priority
                    .get_or_insert_with(Vec::new)
                    .push((id, p, lineno));
            }
            Section::Skip => {}
        }
    }
    Ok(raw)
}

/// Integer weights; real-valued entries are rounded to the nearest integer.
fn parse_weight(t: &str) -> Option<i64> {
    t.parse::<i64>().ok().or_else(|| {
        t.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(|v| v.round() as i64)
    })
}

fn points(map: &HashMap<usize, (f64, f64)>, n: usize, what: &str) -> Result<Vec<(f64, f64)>> {
    if map.len() != n {
        return Err(Error::parse(
            0,
            format!("{what}: expected {n} nodes, found {}", map.len()),
        ));
    }
    (1..=n)
        .map(|id| {
            map.get(&id)
                .copied()
                .ok_or_else(|| Error::parse(0, format!("{what}: node {id} missing")))
        })
        .collect()
}

fn build(raw: Raw, with_priorities: bool) -> Result<Instance> {
    let n = raw
        .dimension
        .ok_or_else(|| Error::parse(0, "missing DIMENSION"))?;
    if n < 2 {
        return Err(Error::InvalidInstance(format!(
            "need at least 2 nodes, got {n}"
        )));
    }
    let wtype = raw
        .weight_type
        .clone()
        .ok_or_else(|| Error::parse(0, "missing EDGE_WEIGHT_TYPE"))?;
    let (cost, coords) = match wtype.as_str() {
        "EUC_2D" => {
            let pts = points(&raw.coords, n, "NODE_COORD_SECTION")?;
            (Matrix::from_fn(n, |i, j| euc_2d(pts[i], pts[j])), Some(pts))
        }
        "EXPLICIT" => {
            let fmt = WeightFormat::parse(
                raw.weight_format
                    .as_deref()
                    .ok_or_else(|| Error::parse(0, "EXPLICIT weights need EDGE_WEIGHT_FORMAT"))?,
            )?;
            let want = fmt.expected_len(n);
            if raw.weights.len() != want {
                return Err(Error::parse(
                    0,
                    format!(
                        "EDGE_WEIGHT_SECTION: expected {want} entries, found {}",
                        raw.weights.len()
                    ),
                ));
            }
            let coords = if raw.display.is_empty() {
                None
            } else {
                Some(points(&raw.display, n, "DISPLAY_DATA_SECTION")?)
            };
            (fmt.fill(n, &raw.weights), coords)
        }
        other => {
            return Err(Error::UnsupportedWeights(format!(
                "EDGE_WEIGHT_TYPE {other}"
            )))
        }
    };
    let time = if raw.times.is_empty() {
        cost.clone()
    } else {
        if raw.times.len() != n * n {
            return Err(Error::parse(0, "TIME_SECTION must be a full matrix"));
        }
        WeightFormat::Full.fill(n, &raw.times)
    };

    let name = raw.name.unwrap_or_default();
    if !with_priorities {
        let inst = Instance::new(name, cost, coords)?;
        return inst.with_time(time);
    }

    let groups = raw.groups.unwrap_or(1);
    let relax = raw.relax.unwrap_or(0);
    if groups == 0 {
        return Err(Error::InvalidInstance("GROUPS must be at least 1".into()));
    }
    let mut priority = vec![0u32; n];
    match raw.priority {
        None if groups > 1 => {
            return Err(Error::parse(
                0,
                format!("GROUPS is {groups} but PRIORITY_SECTION is missing"),
            ));
        }
        None => priority.iter_mut().skip(1).for_each(|p| *p = 1),
        Some(entries) => {
            for (id, p, line) in entries {
                if id < 2 || id > n {
                    return Err(Error::parse(
                        line,
                        format!("node {id} cannot carry a priority"),
                    ));
                }
                if p < 1 || p > groups as i64 {
                    return Err(Error::parse(
                        line,
                        format!("priority {p} outside 1..={groups}"),
                    ));
                }
                if priority[id - 1] != 0 {
                    return Err(Error::parse(
                        line,
                        format!("duplicate priority for node {id}"),
                    ));
                }
                priority[id - 1] = p as u32;
            }
            if let Some(v) = priority.iter().skip(1).position(|&p| p == 0) {
                return Err(Error::parse(0, format!("node {} has no priority", v + 2)));
            }
        }
    }
    Instance::from_parts(name, coords, cost, time, priority, groups, relax)
}

/// Parses a plain TSPLIB file. Priority extensions, if present, are ignored:
/// every customer lands in class 1 with `d = 0`.
pub fn parse_tsplib(text: &str) -> Result<Instance> {
    build(parse_raw(text)?, false)
}

/// Parses a TSPLIB file including `GROUPS`, `DRELAX` and `PRIORITY_SECTION`.
pub fn read_instance(text: &str) -> Result<Instance> {
    build(parse_raw(text)?, true)
}

/// Serialises an instance; `read_instance(&write_instance(x)) == x`.
pub fn write_instance(inst: &Instance) -> String {
    let n = inst.n();
    let mut out = String::new();
    let euclidean = inst
        .coords()
        .is_some_and(|c| (0..n).all(|i| (0..n).all(|j| inst.cost(i, j) == euc_2d(c[i], c[j]))));

    let _ = writeln!(out, "NAME : {}", inst.name());
    let _ = writeln!(out, "TYPE : TSP");
    let _ = writeln!(out, "DIMENSION : {n}");
    if euclidean {
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
    } else {
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EXPLICIT");
        let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX");
    }
    let _ = writeln!(out, "GROUPS : {}", inst.groups());
    let _ = writeln!(out, "DRELAX : {}", inst.relax());

    let write_points = |out: &mut String, header: &str, pts: &[(f64, f64)]| {
        let _ = writeln!(out, "{header}");
        for (i, (x, y)) in pts.iter().enumerate() {
            let _ = writeln!(out, "{} {:?} {:?}", i + 1, x, y);
        }
    };
    let write_matrix = |out: &mut String, header: &str, m: &Matrix| {
        let _ = writeln!(out, "{header}");
        for i in 0..n {
            let row: Vec<String> = m.row(i).iter().map(i64::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    };

    match (euclidean, inst.coords()) {
        (true, Some(pts)) => write_points(&mut out, "NODE_COORD_SECTION", pts),
        (_, pts) => {
            write_matrix(&mut out, "EDGE_WEIGHT_SECTION", inst.cost_matrix());
            if let Some(pts) = pts {
                write_points(&mut out, "DISPLAY_DATA_SECTION", pts);
            }
        }
    }
    if inst.time_matrix() != inst.cost_matrix() {
        write_matrix(&mut out, "TIME_SECTION", inst.time_matrix());
    }
    let _ = writeln!(out, "PRIORITY_SECTION");
    for v in inst.customers() {
        let _ = writeln!(out, "{} {}", v + 1, inst.priority(v));
    }
    let _ = writeln!(out, "EOF");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{assign_groups, Grouping};

    const TINY: &str = "NAME : tiny\nTYPE : TSP\nDIMENSION : 2\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\nEOF\n";

    #[test]
    fn two_node_euclidean() {
        let inst = parse_tsplib(TINY).unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.cost(0, 1), 5);
        assert_eq!(inst.time(1, 0), 5);
        assert_eq!(inst.groups(), 1);
        assert_eq!(inst.priority(1), 1);
    }

    #[test]
    fn explicit_layouts_agree() {
        // 4 nodes, symmetric
        let full = "0 1 2 3\n1 0 4 5\n2 4 0 6\n3 5 6 0";
        let upper = "1 2 3\n4 5\n6";
        let lower = "1\n2 4\n3 5 6";
        let upper_diag = "0 1 2 3 0 4 5 0 6 0";
        let lower_diag = "0 1 0 2 4 0 3 5 6 0";
        let mk = |fmt: &str, body: &str| {
            format!(
                "NAME: m\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: {fmt}\nEDGE_WEIGHT_SECTION\n{body}\nEOF\n"
            )
        };
        let reference = parse_tsplib(&mk("FULL_MATRIX", full)).unwrap();
        for (fmt, body) in [
            ("UPPER_ROW", upper),
            ("LOWER_ROW", lower),
            ("UPPER_DIAG_ROW", upper_diag),
            ("LOWER_DIAG_ROW", lower_diag),
        ] {
            let inst = parse_tsplib(&mk(fmt, body)).unwrap();
            assert_eq!(inst.cost_matrix(), reference.cost_matrix(), "{fmt}");
        }
        assert_eq!(reference.cost(2, 3), 6);
    }

    #[test]
    fn errors() {
        let no_dim = "NAME: x\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF";
        assert!(matches!(parse_tsplib(no_dim), Err(Error::Parse { .. })));

        let geo =
            "NAME: x\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF";
        assert!(matches!(
            parse_tsplib(geo),
            Err(Error::UnsupportedWeights(_))
        ));

        let short = "NAME: x\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\nEOF";
        assert!(parse_tsplib(short).is_err());

        let garbled = "NAME: x\nDIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 zero\n2 1 1\nEOF";
        assert!(parse_tsplib(garbled).is_err());

        let single =
            "NAME: x\nDIMENSION: 1\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\nEOF";
        assert!(parse_tsplib(single).is_err());

        let short_matrix =
            "NAME: x\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: UPPER_ROW\nEDGE_WEIGHT_SECTION\n1 2\nEOF";
        assert!(parse_tsplib(short_matrix).is_err());
    }

    fn with_priority_lines(groups: u32, lines: &str) -> String {
        format!(
            "NAME: p\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nGROUPS: {groups}\nDRELAX: 1\nNODE_COORD_SECTION\n1 0 0\n2 1 0\n3 2 0\n{lines}EOF\n"
        )
    }

    #[test]
    fn priority_section_validation() {
        let ok = read_instance(&with_priority_lines(5, "PRIORITY_SECTION\n2 5\n3 1\n")).unwrap();
        assert_eq!(ok.priorities(), &[0, 5, 1]);
        assert_eq!(ok.relax(), 1);

        assert!(read_instance(&with_priority_lines(5, "PRIORITY_SECTION\n2 6\n3 1\n")).is_err());
        assert!(read_instance(&with_priority_lines(5, "PRIORITY_SECTION\n2 0\n3 1\n")).is_err());
        assert!(read_instance(&with_priority_lines(3, "")).is_err());
        assert!(read_instance(&with_priority_lines(3, "PRIORITY_SECTION\n2 1\n")).is_err());
        assert!(
            read_instance(&with_priority_lines(3, "PRIORITY_SECTION\n1 1\n2 1\n3 1\n")).is_err()
        );
        assert!(
            read_instance(&with_priority_lines(3, "PRIORITY_SECTION\n2 1\n2 2\n3 1\n")).is_err()
        );
        // a single group needs no section
        let one = read_instance(&with_priority_lines(1, "")).unwrap();
        assert_eq!(one.priorities(), &[0, 1, 1]);
    }

    #[test]
    fn round_trip_keeps_priorities_and_times() {
        let pts: Vec<(f64, f64)> = (0..9)
            .map(|k| ((k * 37 % 11) as f64 + 0.25, (k * 13 % 7) as f64))
            .collect();
        let base = Instance::from_coords("rt", pts).unwrap();
        let grouped = assign_groups(&base, 3, Grouping::Random, 4)
            .unwrap()
            .with_relax(1);
        assert_eq!(read_instance(&write_instance(&grouped)).unwrap(), grouped);

        let mut t = grouped.time_matrix().clone();
        t.set(1, 2, 99);
        let timed = grouped.with_time(t).unwrap();
        assert_eq!(read_instance(&write_instance(&timed)).unwrap(), timed);

        let explicit = Instance::new("ex", grouped.cost_matrix().clone(), None)
            .unwrap()
            .with_priorities(grouped.priorities().to_vec(), 3)
            .unwrap();
        assert_eq!(read_instance(&write_instance(&explicit)).unwrap(), explicit);
    }
}
