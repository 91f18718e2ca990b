#ifndef MEANX_H
#define MEANX_H

/* C interface to the n-variable mean iteration library.
 *
 * Jobs are configured with a JSON document (see mx_default_config_json for
 * the schema and defaults), computations return an optional convergence
 * report, and all failures surface as status codes with a thread-local
 * message available from mx_last_error. Buffers handed out by the library
 * are released with mx_buffer_free; reports with mx_report_free.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mx_status {
  MX_OK = 0,
  MX_ERR_DOMAIN = 1,
  MX_ERR_DIMENSION = 2,
  MX_ERR_PARSE = 3,
  MX_ERR_NONCONVERGENCE = 4,
  MX_ERR_NUMERIC = 5,
  MX_ERR_IO = 6
} mx_status;

typedef struct mx_job mx_job;
typedef struct mx_report mx_report;

const char* mx_status_name(mx_status status);

/* Message for the most recent failure on this thread; empty when the last
 * call succeeded. The pointer stays valid until the next library call on the
 * same thread. */
const char* mx_last_error(void);

/* JSON document holding every config key at its default value. Free with
 * mx_buffer_free. */
char* mx_default_config_json(void);

void mx_buffer_free(void* buffer);

/* config_json may be NULL for an all-defaults job. Partial documents are
 * allowed; unknown keys are rejected. */
mx_status mx_job_create(const char* config_json, mx_job** out_job);
void mx_job_free(mx_job* job);

/* count must equal the configured arity. On MX_ERR_NONCONVERGENCE the value
 * and report are still filled with the last iterate. out_report may be NULL
 * when the caller does not need the trace. */
mx_status mx_compute_scalar(mx_job* job, const double* xs, int count,
                            double* out_value, mx_report** out_report);

/* matrices: count blocks of dim*dim doubles, row major, each symmetric
 * positive definite. out_matrix receives dim*dim doubles. */
mx_status mx_compute_spd(mx_job* job, const double* matrices, int dim, int count,
                         double* out_matrix, mx_report** out_report);

int mx_report_converged(const mx_report* report);
int mx_report_iterations(const mx_report* report);
/* Arity of the mean whose barycentric iteration produced the trace. */
int mx_report_arity(const mx_report* report);
int mx_report_trace_length(const mx_report* report);
double mx_report_diameter(const mx_report* report, int index);
int mx_report_has_rho(const mx_report* report);
double mx_report_rho(const mx_report* report);
void mx_report_free(mx_report* report);

/* Runs the sampled property audit for the job's mean and space; returns the
 * report as a JSON document. Free with mx_buffer_free. */
mx_status mx_audit(mx_job* job, char** out_json);

/* Reads a matrix text file (dimension line, then rows; blank-line separated;
 * '#' comments). All matrices must share one dimension. out_data receives
 * count blocks of dim*dim doubles, row major; free with mx_buffer_free. An
 * empty file yields count 0 and a NULL buffer. */
mx_status mx_read_matrix_file(const char* path, double** out_data, int* out_dim,
                              int* out_count);

/* Formats one dim*dim row-major matrix in the matrix text format. Free with
 * mx_buffer_free. */
mx_status mx_format_matrix(const double* data, int dim, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* MEANX_H */
