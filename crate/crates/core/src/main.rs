fn main() {
    let code = phi_orbits::cli::run_main();
    std::process::exit(code);
}
