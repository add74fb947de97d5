fn main() {
    std::process::exit(qwalk_cli::app::main_with_args(std::env::args_os()));
}
