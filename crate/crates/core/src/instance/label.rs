use std::fmt;
use std::str::FromStr;

use super::Grouping;
use crate::error::Error;

/// Benchmark label `X-Y-g-d[-r]`, e.g. `kroA100-C-3-1` or `swiss42-R-5-1-a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InstanceLabel {
    pub base: String,
    pub grouping: Grouping,
    pub groups: u32,
    pub relax: u32,
    pub replicate: Option<char>,
}

impl InstanceLabel {
    pub fn new(base: impl Into<String>, grouping: Grouping, groups: u32, relax: u32) -> Self {
        InstanceLabel {
            base: base.into(),
            grouping,
            groups,
            relax,
            replicate: None,
        }
    }

    pub fn with_replicate(mut self, r: char) -> Self {
        self.replicate = Some(r);
        self
    }

    /// Index of the replicate letter (`a` = 0), 0 when absent.
    pub fn replicate_index(&self) -> u64 {
        self.replicate
            .map(|c| (c as u64).saturating_sub('a' as u64))
            .unwrap_or(0)
    }
}

impl fmt::Display for InstanceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-{}-{}-{}",
            self.base,
            self.grouping.letter(),
            self.groups,
            self.relax
        )?;
        if let Some(r) = self.replicate {
            write!(f, "-{r}")?;
        }
        Ok(())
    }
}

impl FromStr for InstanceLabel {
    type Err = Error;

    /// Accepts `base-Y-g-d[-r]` as well as the compact `baseY-g-d[-r]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidArgument(format!("malformed instance label '{s}'"));
        let mut parts: Vec<&str> = s.split('-').collect();
        let replicate = match parts.last() {
            Some(last) if last.len() == 1 && last.chars().all(|c| c.is_ascii_lowercase()) => {
                let c = last.chars().next();
                parts.pop();
                c
            }
            _ => None,
        };
        if parts.len() < 3 {
            return Err(bad());
        }
        let relax: u32 = parts.pop().unwrap().parse().map_err(|_| bad())?;
        let groups: u32 = parts.pop().unwrap().parse().map_err(|_| bad())?;
        let (base, grouping) = if parts.len() >= 2 {
            let y = parts.pop().unwrap();
            (parts.join("-"), y.parse::<Grouping>().map_err(|_| bad())?)
        } else {
            let head = parts[0];
            let y = head.chars().last().ok_or_else(bad)?;
            let g = y.to_string().parse::<Grouping>().map_err(|_| bad())?;
            (head[..head.len() - 1].to_string(), g)
        };
        if base.is_empty() {
            return Err(bad());
        }
        Ok(InstanceLabel {
            base,
            grouping,
            groups,
            relax,
            replicate,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_and_parses() {
        let l = InstanceLabel::new("kroA100", Grouping::Clustered, 3, 1);
        assert_eq!(l.to_string(), "kroA100-C-3-1");
        assert_eq!("kroA100-C-3-1".parse::<InstanceLabel>().unwrap(), l);

        let l = InstanceLabel::new("swiss42", Grouping::Random, 5, 3).with_replicate('b');
        assert_eq!(l.to_string(), "swiss42-R-5-3-b");
        assert_eq!("swiss42R-5-3-b".parse::<InstanceLabel>().unwrap(), l);
        assert_eq!(l.replicate_index(), 1);
    }

    #[test]
    fn rejects_garbage() {
        assert!("kroA100".parse::<InstanceLabel>().is_err());
        assert!("kroA100-X-3-1".parse::<InstanceLabel>().is_err());
        assert!("kroA100-C-x-1".parse::<InstanceLabel>().is_err());
    }
}
