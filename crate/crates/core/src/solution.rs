//! Plain-text solution files.
//!
//! ```text
//! NAME : kroA100-C-3-1
//! COST : 24049
//! FEASIBLE : true
//! TOUR_SECTION
//! 1
//! ...
//! -1
//! EOF
//! ```
//!
//! Nodes are written 1-based starting with the depot, as in TSPLIB tours.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::feasibility::{is_feasible, Route};
use crate::instance::Instance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub name: String,
    pub cost: i64,
    pub feasible: bool,
    /// 0-based node order starting at the depot.
    pub order: Vec<usize>,
}

impl Solution {
    pub fn new(name: impl Into<String>, route: &Route, inst: &Instance) -> Self {
        Solution {
            name: name.into(),
            cost: route.cost(),
            feasible: is_feasible(route, inst),
            order: route.order().to_vec(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "NAME : {}", self.name);
        let _ = writeln!(s, "COST : {}", self.cost);
        let _ = writeln!(s, "FEASIBLE : {}", self.feasible);
        s.push_str("TOUR_SECTION\n");
        for v in &self.order {
            let _ = writeln!(s, "{}", v + 1);
        }
        s.push_str("-1\nEOF\n");
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut cost = None;
        let mut feasible = None;
        let mut order = Vec::new();
        let mut in_tour = false;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = k + 1;
            if line.is_empty() {
                continue;
            }
            if in_tour {
                let v: i64 = line
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad node '{line}'")))?;
                if v == -1 {
                    in_tour = false;
                } else if v >= 1 {
                    order.push(v as usize - 1);
                } else {
                    return Err(Error::parse(lineno, format!("bad node '{line}'")));
                }
                continue;
            }
            if line == "TOUR_SECTION" {
                in_tour = true;
                continue;
            }
            if line == "EOF" {
                break;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| {
                Error::parse(lineno, format!("expected 'KEY : value', got '{line}'"))
            })?;
            let value = value.trim();
            match key.trim() {
                "NAME" => name = Some(value.to_string()),
                "COST" => {
                    cost = Some(
                        value
                            .parse()
                            .map_err(|_| Error::parse(lineno, "bad cost"))?,
                    )
                }
                "FEASIBLE" => {
                    feasible = Some(
                        value
                            .parse()
                            .map_err(|_| Error::parse(lineno, "bad flag"))?,
                    )
                }
                other => return Err(Error::parse(lineno, format!("unknown key '{other}'"))),
            }
        }
        Ok(Solution {
            name: name.ok_or_else(|| Error::parse(0, "missing NAME"))?,
            cost: cost.ok_or_else(|| Error::parse(0, "missing COST"))?,
            feasible: feasible.ok_or_else(|| Error::parse(0, "missing FEASIBLE"))?,
            order,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Solution::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Rebuilds the route against `inst` and checks the recorded cost and
    /// verdict. Returns the route when both match and it is feasible.
    pub fn verify(&self, inst: &Instance) -> Result<Route> {
        let route = Route::new(self.order.clone(), inst)?;
        if route.cost() != self.cost {
            return Err(Error::InvalidRoute(format!(
                "recorded cost {} but the tour costs {}",
                self.cost,
                route.cost()
            )));
        }
        if !is_feasible(&route, inst) {
            return Err(Error::InvalidRoute("tour breaks the priority rule".into()));
        }
        if !self.feasible {
            return Err(Error::InvalidRoute(
                "recorded as infeasible but the tour is feasible".into(),
            ));
        }
        Ok(route)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst() -> Instance {
        Instance::from_coords("t", vec![(0.0, 0.0), (0.0, 3.0), (4.0, 3.0), (4.0, 0.0)]).unwrap()
    }

    #[test]
    fn round_trip() {
        let inst = inst();
        let route = Route::new(vec![0, 1, 2, 3], &inst).unwrap();
        let sol = Solution::new("t-R-1-0", &route, &inst);
        assert_eq!(sol.cost, 14);
        let text = sol.to_text();
        assert!(
            text.starts_with("NAME : t-R-1-0\nCOST : 14\nFEASIBLE : true\nTOUR_SECTION\n1\n2\n")
        );
        let back = Solution::parse(&text).unwrap();
        assert_eq!(back, sol);
        assert_eq!(back.verify(&inst).unwrap(), route);
    }

    #[test]
    fn verify_catches_mismatches() {
        let inst = inst();
        let route = Route::new(vec![0, 1, 2, 3], &inst).unwrap();
        let mut sol = Solution::new("t", &route, &inst);
        sol.cost = 13;
        assert!(sol.verify(&inst).is_err());
        let strict = inst.with_priorities(vec![0, 2, 1, 1], 2).unwrap();
        let sol = Solution::new("t", &route, &strict);
        assert!(!sol.feasible);
        assert!(sol.verify(&strict).is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(Solution::parse("NAME : x\nCOST : 1\n").is_err());
        assert!(Solution::parse("NAME : x\nCOST : 1\nFEASIBLE : true\nTOUR_SECTION\n0\n").is_err());
        assert!(Solution::parse("WHAT : x\n").is_err());
    }
}
