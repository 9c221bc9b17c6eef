#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spdc {

// Base for every failure this library raises on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical kernels.
struct NoConvergence : Error { using Error::Error; };
struct NoBracket : Error { using Error::Error; };

// Physics-domain preconditions.
struct ValidationError : Error { using Error::Error; };
struct DegenerateDispersion : Error { using Error::Error; };
struct SingularDenominator : Error { using Error::Error; };
struct InconsistentInputs : Error { using Error::Error; };

// Grid / integral coverage.
struct MonochromaticPump : Error { using Error::Error; };
struct EdgeCriterionUnmet : Error { using Error::Error; };
struct AxisMismatch : Error { using Error::Error; };
struct TailNotConverged : Error { using Error::Error; };
struct SumNotConverged : Error { using Error::Error; };
struct ConstraintInfeasible : Error { using Error::Error; };

// Non-fatal findings reported alongside results.
enum class Warning {
    ShortCrystal,        // L below 1 mm
    FinePoling,          // poling period below 5 um at first order
    HighQpmOrder,        // quasi-phase-matching order above 1
    LongWavelength,      // signal/idler vacuum wavelength above 1.6 um
    LongPumpWavelength,  // pump vacuum wavelength above 0.8 um
    LowIndex,            // refractive index below 1.5
    PumpBandwidthIgnored,// operation assumes a monochromatic pump
    BandwidthAtBoxEdge,  // pump-bandwidth optimum pinned to the search box edge
};

inline const char* describe(Warning w) {
    switch (w) {
    case Warning::ShortCrystal: return "crystal length below 1 mm";
    case Warning::FinePoling: return "poling period below 5 um at first order";
    case Warning::HighQpmOrder: return "quasi-phase-matching order above 1";
    case Warning::LongWavelength: return "signal/idler wavelength above 1.6 um";
    case Warning::LongPumpWavelength: return "pump wavelength above 0.8 um";
    case Warning::LowIndex: return "refractive index below 1.5";
    case Warning::PumpBandwidthIgnored: return "pump bandwidth ignored (monochromatic-pump quantity)";
    case Warning::BandwidthAtBoxEdge: return "pump-bandwidth optimum at search box edge";
    }
    return "unknown warning";
}

} // namespace spdc
