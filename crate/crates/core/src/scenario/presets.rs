//! Built-in excitation tables and preset scenario files.

/// Built-in sum-over-states tables, addressable as `builtin:<name>`.
/// The azopyrrole and chloroform tables are illustrative placeholders with
/// realistic magnitudes, not the output of a quantum-chemistry run.
pub const BUILTIN_ROOTS: &[(&str, &str)] = &[
    ("trans_azopyrrole", include_str!("../../data/trans_azopyrrole.roots")),
    ("cis_azopyrrole", include_str!("../../data/cis_azopyrrole.roots")),
    ("chloroform", include_str!("../../data/chloroform.roots")),
];

/// Preset scenarios as `(name, description, toml)`.
pub const PRESETS: &[(&str, &str, &str)] = &[
    (
        "fig2b",
        "single mode + two-level ensemble, detuning -0.05/0/+0.05",
        include_str!("../../presets/fig2b.toml"),
    ),
    (
        "fig2c",
        "single mode + two-level ensemble, omega_A/gamma_A = 800/400/200/100",
        include_str!("../../presets/fig2c.toml"),
    ),
    (
        "fig2e",
        "single mode + azopyrrole/chloroform sum-over-states mixture",
        include_str!("../../presets/fig2e.toml"),
    ),
    (
        "fig2g",
        "gold Fabry-Perot cavity, full embedding with local field",
        include_str!("../../presets/fig2g.toml"),
    ),
    (
        "fig2h",
        "gold Fabry-Perot cavity, scattering part near the resonance",
        include_str!("../../presets/fig2h.toml"),
    ),
];

pub fn builtin_roots(name: &str) -> Option<&'static str> {
    BUILTIN_ROOTS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn preset_toml(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _, _)| *n == name).map(|(_, _, t)| *t)
}

/// `(name, description)` for every preset.
pub fn list_presets() -> impl Iterator<Item = (&'static str, &'static str)> {
    PRESETS.iter().map(|(n, d, _)| (*n, *d))
}
