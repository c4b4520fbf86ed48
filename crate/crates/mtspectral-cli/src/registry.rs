//! Built-in test functions and their expected coefficient-decay families.

use mt_spectral::analysis::DecayModel;

pub struct RegistryEntry {
    pub key: &'static str,
    pub description: &'static str,
    pub eval: fn(f64) -> f64,
    pub expected_decay: Option<DecayModel>,
}

pub const REGISTRY: &[RegistryEntry] = &[
    RegistryEntry {
        key: "runge",
        description: "1/(1+x^2), meromorphic with poles at +-i; geometric coefficient decay",
        eval: |x| 1.0 / (1.0 + x * x),
        expected_decay: Some(DecayModel::Exponential),
    },
    RegistryEntry {
        key: "quartic",
        description: "1/(1+x^4), poles at the primitive eighth roots of unity",
        eval: |x| 1.0 / (1.0 + x.powi(4)),
        expected_decay: Some(DecayModel::Exponential),
    },
    RegistryEntry {
        key: "gauss",
        description: "exp(-x^2), entire with an essential singularity at infinity",
        eval: |x| (-x * x).exp(),
        expected_decay: Some(DecayModel::StretchedExp),
    },
    RegistryEntry {
        key: "sech",
        description: "sech x, exponential tails and poles accumulating at infinity",
        eval: |x| 1.0 / x.cosh(),
        expected_decay: Some(DecayModel::StretchedExp),
    },
    RegistryEntry {
        key: "sinc-runge",
        description: "sin(x)/(1+x^2), oscillatory with slowly decaying tails",
        eval: |x| x.sin() / (1.0 + x * x),
        expected_decay: Some(DecayModel::Algebraic),
    },
    RegistryEntry {
        key: "sin-quartic",
        description: "sin(x)/(1+x^4), oscillatory with faster algebraic decay",
        eval: |x| x.sin() / (1.0 + x.powi(4)),
        expected_decay: Some(DecayModel::Algebraic),
    },
    RegistryEntry {
        key: "wavepacket",
        description: "exp(-x^2) cos(10 x), a localized oscillatory packet",
        eval: |x| (-x * x).exp() * (10.0 * x).cos(),
        expected_decay: Some(DecayModel::StretchedExp),
    },
];

pub fn lookup(key: &str) -> Option<&'static RegistryEntry> {
    REGISTRY.iter().find(|e| e.key == key)
}
