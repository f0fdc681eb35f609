//! Configuration files shipped with the binary.

const PRESETS: &[(&str, &str)] = &[
    (
        "baseline-dynamics",
        include_str!("../presets/baseline-dynamics.conf"),
    ),
    (
        "dynamism-dynamics",
        include_str!("../presets/dynamism-dynamics.conf"),
    ),
    ("stationary", include_str!("../presets/stationary.conf")),
    (
        "nonstationary",
        include_str!("../presets/nonstationary.conf"),
    ),
    (
        "rerandomize-tables",
        include_str!("../presets/rerandomize-tables.conf"),
    ),
    (
        "inherit-structure",
        include_str!("../presets/inherit-structure.conf"),
    ),
    (
        "full-dynamism",
        include_str!("../presets/full-dynamism.conf"),
    ),
    ("size-r50", include_str!("../presets/size-r50.conf")),
    ("size-r200", include_str!("../presets/size-r200.conf")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(name, _)| *name)
}

pub fn get(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    #[test]
    fn every_preset_parses() {
        for name in names() {
            ExperimentConfig::parse(get(name).unwrap()).unwrap_or_else(|e| panic!("{name}: {e:#}"));
        }
        assert!(get("nope").is_none());
    }
}
