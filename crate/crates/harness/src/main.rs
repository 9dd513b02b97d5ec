fn main() {
    std::process::exit(rgg_harness::run_cli(std::env::args_os()));
}
