/// Built-in configs, addressed as `preset:NAME`.
pub const PRESETS: &[(&str, &str)] = &[
    ("uniqueness", include_str!("../../presets/uniqueness.cfg")),
    (
        "conservation-stable",
        include_str!("../../presets/conservation-stable.cfg"),
    ),
    (
        "conservation-growth",
        include_str!("../../presets/conservation-growth.cfg"),
    ),
    (
        "conservation-boundary",
        include_str!("../../presets/conservation-boundary.cfg"),
    ),
    (
        "dependence-stable",
        include_str!("../../presets/dependence-stable.cfg"),
    ),
    (
        "dependence-growth",
        include_str!("../../presets/dependence-growth.cfg"),
    ),
    (
        "dependence-boundary",
        include_str!("../../presets/dependence-boundary.cfg"),
    ),
    (
        "influence-stable",
        include_str!("../../presets/influence-stable.cfg"),
    ),
    (
        "influence-growth",
        include_str!("../../presets/influence-growth.cfg"),
    ),
    (
        "influence-boundary",
        include_str!("../../presets/influence-boundary.cfg"),
    ),
    (
        "steady-decay",
        include_str!("../../presets/steady-decay.cfg"),
    ),
    (
        "steady-fourier",
        include_str!("../../presets/steady-fourier.cfg"),
    ),
    (
        "convergence-stable",
        include_str!("../../presets/convergence-stable.cfg"),
    ),
    (
        "convergence-growth",
        include_str!("../../presets/convergence-growth.cfg"),
    ),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::ExperimentConfig;

    #[test]
    fn every_preset_parses() {
        for (name, text) in PRESETS {
            ExperimentConfig::parse(text, name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
