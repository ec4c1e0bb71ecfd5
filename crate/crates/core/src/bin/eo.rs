fn main() {
    let (report, code) = eo_core::cli::dispatch(std::env::args_os());
    let out = report.render();
    if !out.is_empty() {
        if code == 0 {
            println!("{out}");
        } else {
            eprintln!("{out}");
        }
    }
    std::process::exit(code);
}
