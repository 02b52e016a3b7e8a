//! Build a group from an inline config, then print it back as TOML.

use orbita::chambers::enumerate_chambers;
use orbita::config::Config;
use orbita::spinor::cover_type;

const SO42: &str = r#"
schema = 1

[group.g]
name = "so42"
cartan = [[2, -1, -1], [-1, 2, 0], [-1, 0, 2]]
compact = [false, true, true]
"#;

fn main() {
    let cfg = Config::parse(SO42).unwrap();
    let g = cfg.group().unwrap();
    println!(
        "{}: {} roots, {} noncompact positive, {} chambers, cover {:?}",
        cfg.group.g.name,
        g.roots.len(),
        g.roots.noncompact_count(),
        enumerate_chambers(&g).len(),
        cover_type(&g).kind
    );
    print!("{}", cfg.to_toml());
}
