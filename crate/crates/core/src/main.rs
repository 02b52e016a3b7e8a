use std::io::Write;

fn main() {
    // Panics are reported like any other error: one JSON line on stderr.
    std::panic::set_hook(Box::new(|info| {
        let msg = info
            .payload()
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| info.payload().downcast_ref::<String>().cloned())
            .unwrap_or_default();
        let body = serde_json::json!({ "error": "internal_panic", "message": msg });
        let _ = writeln!(std::io::stderr(), "{body}");
    }));
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        orbita::cli::run_from(std::env::args_os(), &mut out, &mut err)
    }))
    .unwrap_or(1);
    std::process::exit(code);
}
