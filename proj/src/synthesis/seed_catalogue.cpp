// SPDX-License-Identifier: Apache-2.0
#include "gentool/provider/mock_generator.hpp"
#include "gentool/synthesis/synthesis.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace gentool::synthesis {

namespace {

struct Domain {
    std::string_view tag;
    std::array<std::string_view, 4> objects;
};

constexpr std::array<Domain, 22> kDomains = {{
    {"travel", {"flight", "hotel_room", "rental_car", "tour_package"}},
    {"food", {"restaurant_table", "food_delivery", "recipe", "grocery_order"}},
    {"finance", {"bank_transfer", "savings_bond", "loan_quote", "stock_price"}},
    {"health", {"doctor_appointment", "prescription", "fitness_class", "lab_result"}},
    {"education", {"course", "exam_schedule", "tutor_session", "library_book"}},
    {"jobs", {"job_listing", "resume", "interview_slot", "salary_report"}},
    {"real_estate", {"apartment", "property_listing", "rent_payment", "home_inspection"}},
    {"shopping", {"product", "shopping_cart", "gift_card", "return_request"}},
    {"entertainment", {"movie_ticket", "concert_ticket", "streaming_show", "game_pass"}},
    {"weather", {"weather_forecast", "air_quality", "storm_alert", "pollen_level"}},
    {"calendar", {"calendar_event", "reminder", "meeting_room", "holiday"}},
    {"communication", {"email_message", "sms_message", "voice_call", "contact_card"}},
    {"transport", {"train_ticket", "bus_route", "taxi_ride", "parking_spot"}},
    {"home", {"appliance_repair", "cleaning_service", "smart_light", "thermostat"}},
    {"sports", {"match_score", "team_roster", "stadium_seat", "training_plan"}},
    {"legal", {"contract_review", "company_credit", "trademark", "court_hearing"}},
    {"automotive", {"car_service", "fuel_price", "vehicle_history", "tire_change"}},
    {"pets", {"vet_visit", "pet_food_order", "dog_walker", "pet_license"}},
    {"media", {"news_article", "podcast_episode", "photo_album", "blog_post"}},
    {"government", {"passport_renewal", "tax_return", "permit", "voter_registration"}},
    {"technology", {"software_license", "cloud_server", "domain_name", "support_ticket"}},
    {"logistics", {"parcel_shipment", "warehouse_stock", "freight_quote", "customs_form"}},
}};

constexpr std::array<std::string_view, 8> kVerbs = {"search", "book", "cancel", "check",
                                                    "update", "create", "compare", "track"};

struct ParamTemplate {
    std::string_view name;
    std::string_view description;
};

constexpr std::array<ParamTemplate, 16> kParams = {{
    {"start_date", "Start date"},
    {"end_date", "End date"},
    {"city", "City"},
    {"destination", "Destination"},
    {"customer_name", "Customer name"},
    {"reference_code", "Reference code"},
    {"quantity", "Quantity requested"},
    {"budget", "Maximum budget"},
    {"preferred_time", "Preferred time"},
    {"category", "Category"},
    {"contact_email", "Contact email"},
    {"notes", "Additional notes"},
    {"language", "Preferred language"},
    {"priority", "Priority level"},
    {"account_number", "Account number"},
    {"keyword", "Search keyword"},
}};

constexpr std::array<ParamTemplate, 6> kReturns = {{
    {"status", "Outcome of the request"},
    {"details", "Detailed information"},
    {"confirmation_code", "Confirmation code"},
    {"price", "Quoted price"},
    {"results", "Matching records"},
    {"message", "Message for the user"},
}};

std::string words_of(std::string_view identifier) {
    std::string out(identifier);
    for (char& c : out) {
        if (c == '_') c = ' ';
    }
    return out;
}

// Picks `count` distinct indices out of n, in ascending order.
std::vector<std::size_t> pick(std::size_t n, std::size_t count, std::mt19937_64& rng) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[provider::draw(rng, i + 1)]);
    order.resize(count);
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace

std::vector<SeedPair> mock_seed_corpus(std::size_t count, std::uint64_t seed) {
    // Every (domain, object, verb) triple, visited in a seed-dependent order.
    const std::size_t combos = kDomains.size() * 4 * kVerbs.size();
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(combos);
    for (std::size_t i = 0; i < combos; ++i) order[i] = i;
    for (std::size_t i = combos - 1; i > 0; --i) std::swap(order[i], order[provider::draw(rng, i + 1)]);

    std::vector<SeedPair> seeds;
    seeds.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        const std::size_t combo = order[n % combos];
        const std::size_t round = n / combos;
        const Domain& domain = kDomains[combo / (4 * kVerbs.size())];
        const std::string_view object = domain.objects[(combo / kVerbs.size()) % 4];
        const std::string_view verb = kVerbs[combo % kVerbs.size()];

        core::ToolSpec tool;
        tool.name = std::string(verb) + "_" + std::string(object);
        if (round > 0) tool.name += "_v" + std::to_string(round + 1);
        tool.description = "Tool to " + std::string(verb) + " " + words_of(object) + " records in the " +
                           words_of(domain.tag) + " domain";
        const std::size_t param_count = 2 + provider::draw(rng, 4);
        for (std::size_t i : pick(kParams.size(), param_count, rng)) {
            core::ParameterSpec param;
            param.name = std::string(kParams[i].name);
            param.description = std::string(kParams[i].description);
            param.required = provider::draw(rng, 4) != 0;
            tool.parameters.push_back(std::move(param));
        }
        tool.parameters.front().required = true;
        const std::size_t return_count = 1 + provider::draw(rng, 3);
        for (std::size_t i : pick(kReturns.size(), return_count, rng)) {
            tool.returns.push_back({std::string(kReturns[i].name), std::string(kReturns[i].description)});
        }

        SeedPair pair;
        pair.query = provider::mock::query_for(tool, rng);
        pair.gold_tool = std::move(tool);
        pair.domain_tag = std::string(domain.tag);
        seeds.push_back(std::move(pair));
    }
    return seeds;
}

}  // namespace gentool::synthesis
