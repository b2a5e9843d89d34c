#include "nodal/output.hpp"

#include <fstream>
#include <iomanip>
#include <limits>

#include "nodal/conjunction.hpp"

namespace nodal::output {

namespace {

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<const char*> header) : out_(path) {
        if (!out_) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
        out_ << std::setprecision(std::numeric_limits<double>::max_digits10);
        bool first = true;
        for (const char* h : header) {
            out_ << (first ? "" : ",") << h;
            first = false;
        }
        out_ << '\n';
    }

    CsvWriter& operator<<(double v) {
        out_ << (first_ ? "" : ",") << v;
        first_ = false;
        return *this;
    }

    template <class Derived>
    CsvWriter& operator<<(const Eigen::MatrixBase<Derived>& v) {
        for (Eigen::Index k = 0; k < v.size(); ++k) *this << static_cast<double>(v(k));
        return *this;
    }

    void end_row() {
        out_ << '\n';
        first_ = true;
    }

private:
    std::ofstream out_;
    bool first_ = true;
};

Vec3 eta_vector(const ReferenceParams& eta) { return {eta.p1, eta.ec, eta.es}; }

}  // namespace

void write_trajectory(const std::filesystem::path& path, const NodalTrajectory& traj) {
    CsvWriter csv(path, {"t", "dtheta", "dp", "dxi_x", "dxi_y", "dh_x", "dh_y", "p1", "ec", "es", "dr_R", "dr_T",
                         "dr_N"});
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        csv << traj.t[k] << traj.oe[k].vector() << eta_vector(traj.eta[k])
            << relstate::relative_position(traj.oe[k], traj.eta[k]).dr;
        csv.end_row();
    }
}

void write_truth_log(const std::filesystem::path& path, const FlybyRun& run) {
    CsvWriter csv(path, {"t", "dtheta", "dp", "dxi_x", "dxi_y", "dh_x", "dh_y", "p1", "ec", "es", "range", "beta"});
    for (const FlybyStep& s : run.steps) {
        csv << s.t << s.oe_true << eta_vector(s.eta) << s.range << s.beta;
        csv.end_row();
    }
}

void write_filter_log(const std::filesystem::path& path, const FlybyRun& run) {
    CsvWriter csv(path, {"t",          "dtheta_hat", "dp_hat",      "dxi_x_hat",   "dxi_y_hat",   "dh_x_hat",
                         "dh_y_hat",   "err_dtheta", "err_dp",      "err_dxi_x",   "err_dxi_y",   "err_dh_x",
                         "err_dh_y",   "3s_dtheta",  "3s_dp",       "3s_dxi_x",    "3s_dxi_y",    "3s_dh_x",
                         "3s_dh_y",    "range_err",  "3s_range",    "zeta_hat",    "3s_zeta",     "innov_az",
                         "innov_el",   "innov_beta"});
    for (const FlybyStep& s : run.steps) {
        csv << s.t << s.oe_hat << s.error() << Vec6(3.0 * s.sigma) << s.range_err << 3.0 * s.range_sigma << s.zeta_hat
            << 3.0 * s.zeta_sigma << s.innovation;
        csv.end_row();
    }
}

void write_screening(const std::filesystem::path& path, const FlybyRun& run) {
    CsvWriter csv(path, {"t", "zeta", "3s_zeta", "margin_asc", "margin_desc", "node_separation"});
    for (const FlybyStep& s : run.steps) {
        const NodeMargins m = conjunction::node_margins(NodalRelativeState::from_vector(s.oe_hat), s.eta);
        csv << s.t << s.zeta_hat << 3.0 * s.zeta_sigma << m.ascending << m.descending << s.node_separation;
        csv.end_row();
    }
}

void write_screening(const std::filesystem::path& path, const NodalRelativeState& oe, const ReferenceParams& eta) {
    CsvWriter csv(path, {"t", "zeta", "3s_zeta", "margin_asc", "margin_desc", "node_separation"});
    const NodeMargins m = conjunction::node_margins(oe, eta);
    csv << 0.0 << conjunction::zeta(oe, eta) << 0.0 << m.ascending << m.descending
        << conjunction::node_separation(oe, eta);
    csv.end_row();
}

void write_montecarlo(const std::filesystem::path& path, const MonteCarloSummary& summary) {
    CsvWriter csv(path, {"t",          "true_s_dtheta", "true_s_dp",    "true_s_dxi_x",   "true_s_dxi_y",
                         "true_s_dh_x", "true_s_dh_y",  "filt_s_dtheta", "filt_s_dp",     "filt_s_dxi_x",
                         "filt_s_dxi_y", "filt_s_dh_x", "filt_s_dh_y",  "mean_nees",      "range_err_sigma",
                         "filt_range_sigma", "zeta_contains_zero"});
    for (const MonteCarloStep& s : summary.steps) {
        csv << s.t << s.true_sigma << s.filter_sigma << s.mean_nees << s.range_err_sigma << s.range_sigma
            << s.zeta_contains_zero;
        csv.end_row();
    }
}

void write_validation(const std::filesystem::path& path, const ValidationResult& result) {
    CsvWriter csv(path, {"t", "model_R", "model_T", "model_N", "cowell_R", "cowell_T", "cowell_N", "discrepancy"});
    for (const ValidationSample& s : result.samples) {
        csv << s.t << s.dr_model << s.dr_cowell << (s.dr_model - s.dr_cowell).norm();
        csv.end_row();
    }
}

void write_maneuver(const std::filesystem::path& path, const std::vector<ManeuverResult>& results) {
    CsvWriter csv(path, {"offset", "t", "zeta_hat", "3s_zeta", "delta_zeta", "dv_R", "dv_T", "dv_N", "dv_norm"});
    for (const ManeuverResult& r : results) {
        for (const ManeuverSample& s : r.profile) {
            csv << r.offset << s.t << s.zeta_hat << 3.0 * s.zeta_sigma << s.delta_zeta << s.delta_v << s.delta_v.norm();
            csv.end_row();
        }
    }
}

nlohmann::json summary(const MonteCarloSummary& mc) {
    return {{"runs", mc.runs},
            {"seed", mc.seed},
            {"sample_dt", mc.sample_dt},
            {"detection_rate", mc.detection_rate},
            {"coverage", mc.coverage},
            {"component_coverage", std::vector<double>(mc.component_coverage.data(), mc.component_coverage.data() + 6)},
            {"final_range_err_sigma_km", mc.final_range_err_sigma},
            {"final_range_err_rms_km", mc.final_range_err_rms},
            {"final_filter_range_sigma_km", mc.final_filter_range_sigma},
            {"initial_range_sigma_km", mc.initial_range_sigma},
            {"initial_range_err_sigma_km", mc.initial_range_err_sigma},
            {"range_reduction", mc.range_reduction},
            {"nees_in_bounds", mc.nees_in_bounds},
            {"mean_nees", mc.mean_nees},
            {"outlier_fraction", mc.outlier_fraction}};
}

nlohmann::json summary(const FlybyRun& run) {
    const FlybyStep& last = run.steps.back();
    return {{"steps", run.steps.size()},
            {"detected", run.detected},
            {"coverage", static_cast<double>(run.coverage_hits) / static_cast<double>(run.coverage_total)},
            {"initial_range_err_km", run.initial_range_err},
            {"initial_range_sigma_km", run.initial_range_sigma},
            {"final_range_km", last.range},
            {"final_range_err_km", last.range_err},
            {"final_range_sigma_km", last.range_sigma},
            {"final_zeta_hat", last.zeta_hat},
            {"final_zeta_sigma", last.zeta_sigma}};
}

nlohmann::json summary(const ValidationResult& v) {
    return {{"max_discrepancy_km", v.max_discrepancy}, {"max_discrepancy_unforced_km", v.max_discrepancy_unforced}};
}

nlohmann::json summary(const ManeuverResult& m) {
    return {{"offset", m.offset},
            {"t_m", m.plan.t_m},
            {"delta_zeta", m.plan.delta_zeta},
            {"delta_v_mps", m.plan.delta_v.norm() * 1e3},
            {"delta_v_rtn_mps", {m.plan.delta_v.x() * 1e3, m.plan.delta_v.y() * 1e3, m.plan.delta_v.z() * 1e3}},
            {"max_early_delta_v_mps", m.max_early_dv * 1e3},
            {"zeta_change_exact", m.zeta_change_exact},
            {"miss_nominal_km", m.miss_nominal},
            {"miss_maneuvered_km", m.miss_maneuvered},
            {"t_closest", m.t_closest}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace nodal::output
