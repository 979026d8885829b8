//! The engine may only talk to platforms through the wire protocol.

#[test]
fn engine_does_not_link_simulator_or_platform() {
    let manifest: toml::Table = include_str!("../Cargo.toml").parse().unwrap();
    let deps = manifest["dependencies"].as_table().unwrap();
    for forbidden in ["adaudit-sim", "adaudit-platform"] {
        assert!(!deps.contains_key(forbidden), "{forbidden} is a normal dependency of the engine");
    }
    assert!(deps.contains_key("adaudit-wire"));
}
