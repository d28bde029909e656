//! Scenario documents shipped with the binary.

pub const EXAMPLE1: &str = include_str!("../scenarios/example1.json");
#[cfg(test)]
pub const EXAMPLE1_A3_12: &str = include_str!("../scenarios/example1_a3_12.json");
pub const EXAMPLE2_RDSP: &str = include_str!("../scenarios/example2_rdsp.json");
pub const APPLICATION: &str = include_str!("../scenarios/application.json");

#[cfg(test)]
pub const ALL: [(&str, &str); 4] = [
    ("example1.json", EXAMPLE1),
    ("example1_a3_12.json", EXAMPLE1_A3_12),
    ("example2_rdsp.json", EXAMPLE2_RDSP),
    ("application.json", APPLICATION),
];
