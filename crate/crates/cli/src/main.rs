fn main() {
    std::process::exit(sheafpave_cli::run(std::env::args_os()));
}
