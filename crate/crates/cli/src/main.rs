fn main() {
    std::process::exit(nodalscope_cli::main_with_args(std::env::args_os()));
}
