fn main() -> std::process::ExitCode {
    bve_symmetry::cli::run(std::env::args_os())
}
