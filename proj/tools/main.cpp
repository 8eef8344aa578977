#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "etuk/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Budgeted top-k inference for extreme multi-label classification"};
    app.require_subcommand(1);
    etuk::cli::register_infer(app);
    etuk::cli::register_eval(app);
    etuk::cli::register_oracle(app);
    etuk::cli::register_weights(app);
    etuk::cli::register_plt(app);
    etuk::cli::register_synth(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const etuk::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const etuk::CapabilityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const etuk::Error& e) {
        // parse, validation, configuration and dimension errors
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
