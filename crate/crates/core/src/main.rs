fn main() {
    std::process::exit(mads_reconfig::harness::cli::run_cli(std::env::args_os()));
}
