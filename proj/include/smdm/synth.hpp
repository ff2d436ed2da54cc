#pragma once

#include <cstdint>
#include <vector>

#include "smdm/bytes.hpp"
#include "smdm/instance.hpp"
#include "smdm/schema.hpp"

namespace smdm {

// Deterministic stand-in for a real campaign log over the built-in bank
// schema. Ground truth: yes iff duration > 320 and previous ≥ 1, then
// flipped with probability `noise`. One SplitMix64 drives every draw, so a
// seed fully determines the stream.
inline std::vector<Instance> synth_campaign_stream(std::size_t n, std::uint64_t seed,
                                                   double noise) {
    if (!(noise >= 0.0) || !(noise < 0.5))
        fail(errc::domain_error, "noise must be in [0, 0.5)");
    static const DatasetSchema schema = builtin_bank_marketing_schema();
    auto dom = [&](const char* name) {
        return static_cast<std::uint64_t>(
            schema.attributes[*schema.find_attribute(name)].domain.size());
    };
    const std::uint64_t jobs = dom("job");
    const std::uint64_t maritals = dom("marital");
    const std::uint64_t educations = dom("education");
    const std::uint64_t yesno = dom("default");
    const std::uint64_t contacts = dom("contact");
    const std::uint64_t months = dom("month");
    const std::uint64_t days = dom("day_of_week");
    const std::uint64_t poutcomes = dom("poutcome");

    SplitMix64 rng(seed);
    std::vector<Instance> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Instance inst;
        inst.cells.resize(schema.attribute_count(), Cell::missing());
        inst.cells[0] = Cell::number(static_cast<double>(18 + rng.next_below(78)));
        inst.cells[1] = Cell::category(static_cast<std::uint16_t>(rng.next_below(jobs)));
        inst.cells[2] = Cell::category(static_cast<std::uint16_t>(rng.next_below(maritals)));
        inst.cells[3] = Cell::category(static_cast<std::uint16_t>(rng.next_below(educations)));
        inst.cells[4] = Cell::category(static_cast<std::uint16_t>(rng.next_below(yesno)));
        inst.cells[5] = Cell::category(static_cast<std::uint16_t>(rng.next_below(yesno)));
        inst.cells[6] = Cell::category(static_cast<std::uint16_t>(rng.next_below(yesno)));
        inst.cells[7] = Cell::category(static_cast<std::uint16_t>(rng.next_below(contacts)));
        inst.cells[8] = Cell::category(static_cast<std::uint16_t>(rng.next_below(months)));
        inst.cells[9] = Cell::category(static_cast<std::uint16_t>(rng.next_below(days)));
        double duration = rng.next_real(0.0, 640.0);
        inst.cells[10] = Cell::number(duration);
        inst.cells[11] = Cell::number(static_cast<double>(1 + rng.next_below(10)));
        inst.cells[12] = Cell::number(rng.next_double() < 0.8
                                          ? 999.0
                                          : static_cast<double>(rng.next_below(30)));
        double previous = static_cast<double>(rng.next_below(4));
        inst.cells[13] = Cell::number(previous);
        inst.cells[14] = Cell::category(static_cast<std::uint16_t>(rng.next_below(poutcomes)));
        inst.cells[15] = Cell::number(rng.next_real(-3.4, 1.4));
        inst.cells[16] = Cell::number(rng.next_real(92.2, 94.8));
        inst.cells[17] = Cell::number(rng.next_real(-50.8, -26.9));
        inst.cells[18] = Cell::number(rng.next_real(0.6, 5.1));
        inst.cells[19] = Cell::number(rng.next_real(4963.0, 5228.0));

        bool yes = duration > 320.0 && previous >= 1.0;
        if (rng.next_double() < noise) yes = !yes;
        inst.label = static_cast<std::uint16_t>(yes ? 1 : 0);
        out.push_back(std::move(inst));
    }
    return out;
}

} // namespace smdm
