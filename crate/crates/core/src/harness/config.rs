use crate::error::{Error, Result};
use crate::evolution::SimConfig;

/// Parses and validates a TOML run description.
///
/// Sections: `physics` (required: `d`, `sigma`, `amplitude`/`A`,
/// `center`/`r_c`), `grid`, `stepping`, `regrid`, `stopping`, `output`.
/// Unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let cfg: SimConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// TOML echo of `cfg` with every default filled in; parsing it back gives
/// the same configuration.
pub fn config_to_toml(cfg: &SimConfig) -> Result<String> {
    toml::to_string(&cfg.resolved()).map_err(|e| Error::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[physics]\nd = 2\nsigma = 4\nA = 2\nr_c = 5\nwidth = 1\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c, SimConfig::ring(2, 4.0, 2.0, 5.0));
    }

    #[test]
    fn missing_key_is_named() {
        let e = parse_config("[physics]\nd = 2\nA = 2\nr_c = 5\n").unwrap_err();
        assert!(e.to_string().contains("sigma"), "{e}");
    }

    #[test]
    fn validation_errors() {
        let e = parse_config("[physics]\nd = 2\nsigma = 0\nA = 2\nr_c = 5\n").unwrap_err();
        assert!(e.to_string().contains("sigma must be positive"), "{e}");
        let e = parse_config(&format!("{MINIMAL}[grid]\nnodes = 4\n")).unwrap_err();
        assert!(e.to_string().contains("nodes"), "{e}");
        let e = parse_config(&format!("{MINIMAL}[grid]\nnodez = 4096\n")).unwrap_err();
        assert!(e.to_string().contains("nodez"), "{e}");
    }

    #[test]
    fn echo_round_trips() {
        let c = parse_config(MINIMAL).unwrap();
        let echo = config_to_toml(&c).unwrap();
        let back = parse_config(&echo).unwrap();
        assert_eq!(back, c.resolved());
        assert_eq!(config_to_toml(&back).unwrap(), echo);
    }
}
