use std::path::Path;

use crate::error::{Error, Result};
use crate::instance::{assign_groups, Grouping, Instance, InstanceLabel};

/// Which variants of a base instance to generate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub groups: Vec<u32>,
    pub relax: Vec<u32>,
    pub groupings: Vec<Grouping>,
    /// Independent groupings per `(Y, g)` when `g > 1`; lettered `a`, `b`, ...
    /// when more than one.
    pub replicates: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            groups: vec![1, 3, 5],
            relax: vec![0, 1, 3],
            groupings: vec![Grouping::Random, Grouping::Clustered],
            replicates: 1,
            seed: 0,
        }
    }
}

impl SuiteConfig {
    /// Relaxations kept for `g` classes: `d = 0` always, otherwise only values
    /// that leave the rule binding (`d < g - 1`).
    pub fn relax_for(&self, g: u32) -> Vec<u32> {
        self.relax
            .iter()
            .copied()
            .filter(|&d| d == 0 || d + 1 < g)
            .collect()
    }
}

/// Seed of the grouping behind `label`. Independent of `d`, so instances that
/// differ only in `d` share their classes.
pub fn grouping_seed(suite_seed: u64, label: &InstanceLabel) -> u64 {
    // FNV-1a, stable across platforms and releases
    let key = format!(
        "{}|{}|{}|{}",
        label.base,
        label.grouping.letter(),
        label.groups,
        label.replicate_index()
    );
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in key.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ suite_seed
}

/// Expands `base` into labelled instances, in a fixed order.
pub fn generate_suite(
    base: &Instance,
    config: &SuiteConfig,
) -> Result<Vec<(InstanceLabel, Instance)>> {
    if config.replicates == 0 || config.replicates > 26 {
        return Err(Error::InvalidArgument(
            "replicates must be between 1 and 26".into(),
        ));
    }
    let base_name = base.name().to_string();
    let mut out = Vec::new();
    for &grouping in &config.groupings {
        for &g in &config.groups {
            let reps = if g > 1 { config.replicates } else { 1 };
            for r in 0..reps {
                let letter = (reps > 1).then(|| (b'a' + r as u8) as char);
                let mut label = InstanceLabel::new(base_name.clone(), grouping, g, 0);
                if let Some(c) = letter {
                    label = label.with_replicate(c);
                }
                let grouped = assign_groups(base, g, grouping, grouping_seed(config.seed, &label))?;
                for d in config.relax_for(g) {
                    let label = InstanceLabel {
                        relax: d,
                        ..label.clone()
                    };
                    let inst = grouped.with_relax(d).with_name(label.to_string());
                    out.push((label, inst));
                }
            }
        }
    }
    Ok(out)
}

/// Writes each instance to `dir/<label>.ctsp`.
pub fn write_suite(
    dir: &Path,
    suite: &[(InstanceLabel, Instance)],
) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    suite
        .iter()
        .map(|(label, inst)| {
            let path = dir.join(format!("{label}.ctsp"));
            inst.save(&path)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Instance {
        let pts = (0..30)
            .map(|k| ((k * 17 % 31) as f64, (k * 11 % 29) as f64))
            .collect();
        Instance::from_coords("pts30", pts).unwrap()
    }

    #[test]
    fn default_suite_shape() {
        let suite = generate_suite(&base(), &SuiteConfig::default()).unwrap();
        let labels: Vec<String> = suite.iter().map(|(l, _)| l.to_string()).collect();
        // per grouping: g=1 d=0; g=3 d=0,1; g=5 d=0,1,3
        assert_eq!(labels.len(), 12);
        assert_eq!(
            labels[..6],
            [
                "pts30-R-1-0",
                "pts30-R-3-0",
                "pts30-R-3-1",
                "pts30-R-5-0",
                "pts30-R-5-1",
                "pts30-R-5-3"
            ]
        );
        for (label, inst) in &suite {
            assert_eq!(inst.groups(), label.groups);
            assert_eq!(inst.relax(), label.relax);
            assert_eq!(inst.name(), label.to_string());
        }
    }

    #[test]
    fn relaxations_share_classes() {
        let suite = generate_suite(&base(), &SuiteConfig::default()).unwrap();
        let find = |s: &str| &suite.iter().find(|(l, _)| l.to_string() == s).unwrap().1;
        assert_eq!(
            find("pts30-C-5-0").priorities(),
            find("pts30-C-5-3").priorities()
        );
    }

    #[test]
    fn replicates_differ() {
        let config = SuiteConfig {
            replicates: 3,
            groups: vec![1, 5],
            relax: vec![0],
            ..SuiteConfig::default()
        };
        let suite = generate_suite(&base(), &config).unwrap();
        let labels: Vec<String> = suite.iter().map(|(l, _)| l.to_string()).collect();
        assert!(labels.contains(&"pts30-C-1-0".to_string()));
        assert!(labels.contains(&"pts30-R-5-0-c".to_string()));
        let a = &suite
            .iter()
            .find(|(l, _)| l.to_string() == "pts30-R-5-0-a")
            .unwrap()
            .1;
        let b = &suite
            .iter()
            .find(|(l, _)| l.to_string() == "pts30-R-5-0-b")
            .unwrap()
            .1;
        assert_ne!(a.priorities(), b.priorities());
    }
}
