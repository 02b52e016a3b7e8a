//! Configurations shipped with the crate.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::rootdata::GroupData;

pub const NAMES: [&str; 6] = ["sl2", "su21", "sp4", "diag-sl2", "hol-antihol-sl2", "identity-su21"];

pub fn source(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".cfg").unwrap_or(name);
    Some(match name {
        "sl2" => include_str!("../data/sl2.cfg"),
        "su21" => include_str!("../data/su21.cfg"),
        "sp4" => include_str!("../data/sp4.cfg"),
        "diag-sl2" => include_str!("../data/diag-sl2.cfg"),
        "hol-antihol-sl2" => include_str!("../data/hol-antihol-sl2.cfg"),
        "identity-su21" => include_str!("../data/identity-su21.cfg"),
        _ => return None,
    })
}

pub fn config(name: &str) -> Result<Config> {
    let text = source(name).ok_or_else(|| Error::Config(format!("no bundled config named {name:?}")))?;
    Config::parse(text)
}

fn group(name: &str) -> GroupData {
    config(name).and_then(|c| c.group()).expect("bundled config is valid")
}

pub fn sl2() -> GroupData {
    group("sl2")
}

pub fn su21() -> GroupData {
    group("su21")
}

pub fn sp4() -> GroupData {
    group("sp4")
}
