fn main() {
    std::process::exit(cpg::console::run_cli(std::env::args()));
}
