/*
 * C interface to the collaborative-storage sensor network simulator.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a csn_status; on
 * failure csn_last_error() describes the problem (thread-local, valid until
 * the next call on the same thread).
 */
#ifndef CSN_CSN_H
#define CSN_CSN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define CSN_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define CSN_API __attribute__((visibility("default")))
#else
#  define CSN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum csn_status {
    CSN_OK = 0,
    CSN_ERR_ARGUMENT = 1,
    CSN_ERR_CONFIG = 2,
    CSN_ERR_IO = 3,
    CSN_ERR_UNKNOWN_PRESET = 4,
    CSN_ERR_INTERNAL = 5
} csn_status;

typedef struct csn_scenario csn_scenario;
typedef struct csn_result csn_result;

typedef struct csn_summary {
    double pre_energy_j;
    double post_energy_j;
    double loss_frac;
    double mean_collection_s;
    double mean_storage_final_bytes;
    uint32_t density;
} csn_summary;

typedef struct csn_tick {
    double t;
    double mean_storage_bytes;
    double depleted_frac;
    double bincov;
    double cov25;
    double cov50;
    double cov100;
    double deadzone_frac;
} csn_tick;

/* Byte ledger of one run; the first five fields balance exactly:
 * generated = stored_raw + suppressed + collision_lost + lost_to_storage. */
typedef struct csn_ledger {
    uint64_t generated;
    uint64_t stored_raw;
    uint64_t suppressed;
    uint64_t collision_lost;
    uint64_t lost_to_storage;
    uint64_t stored;
    double storage_j;
    double radio_j;
} csn_ledger;

CSN_API const char* csn_version(void);
CSN_API const char* csn_last_error(void);

CSN_API csn_status csn_scenario_parse(const char* text, csn_scenario** out);
CSN_API csn_status csn_scenario_load(const char* path, csn_scenario** out);
/* Default scenario for a named preset entry (index into the expanded matrix). */
CSN_API csn_status csn_scenario_from_preset(const char* preset, size_t index, csn_scenario** out);
CSN_API void csn_scenario_free(csn_scenario* scenario);
/* Canonical text form; release with csn_string_free. */
CSN_API csn_status csn_scenario_serialize(const csn_scenario* scenario, char** out);
CSN_API size_t csn_scenario_seed_count(const csn_scenario* scenario);
CSN_API void csn_string_free(char* s);

/* One seed of a scenario. */
CSN_API csn_status csn_simulate(const csn_scenario* scenario, uint64_t seed, csn_result** out);
CSN_API void csn_result_free(csn_result* result);
CSN_API csn_status csn_result_summary(const csn_result* result, csn_summary* out);
CSN_API csn_status csn_result_ledger(const csn_result* result, csn_ledger* out);
CSN_API size_t csn_result_tick_count(const csn_result* result);
CSN_API csn_status csn_result_tick(const csn_result* result, size_t index, csn_tick* out);
/* Time-series CSV text; release with csn_string_free. */
CSN_API csn_status csn_result_timeseries_csv(const csn_result* result, char** out);

/* All seeds, written as per-seed, mean and summary CSVs under out_dir.
 * jobs == 0 uses CSN_JOBS or the hardware concurrency. */
CSN_API csn_status csn_run_scenario(const csn_scenario* scenario, const char* out_dir, unsigned jobs);
CSN_API csn_status csn_run_preset(const char* name, const char* out_dir, unsigned jobs);

CSN_API size_t csn_preset_count(void);
CSN_API const char* csn_preset_name(size_t index);
CSN_API const char* csn_preset_description(size_t index);
CSN_API size_t csn_preset_scenario_count(const char* name);

#ifdef __cplusplus
}
#endif

#endif /* CSN_CSN_H */
