/* The public header must compile as C99 and link against the library. */
#include "wireoff/wireoff.h"

#include <stdio.h>
#include <string.h>

int main(void) {
    wo_inputs* in = NULL;
    char* out = NULL;
    const char* volumes = "timestamp_minute,vendor_id,count\n10,a,1\n11,a,2\n";

    if (strcmp(wo_version(), "1.0.0") != 0) return 1;
    if (wo_inputs_create(&in) != WO_OK) return 2;
    if (wo_inputs_load_text(in, WO_INPUT_VOLUMES, volumes, strlen(volumes)) != WO_OK) return 3;
    if (!wo_inputs_has(in, WO_INPUT_VOLUMES) || wo_inputs_has(in, WO_INPUT_EVENTS)) return 4;
    if (wo_run(WO_CMD_RECOMMEND, in, NULL, NULL, &out) != WO_ERR_VALIDATION) return 5;
    if (strlen(wo_last_error()) == 0) return 6;
    if (!wo_status_is_input_error(WO_ERR_GAP)) return 7;
    wo_inputs_free(in);
    printf("%s ok\n", wo_status_name(WO_OK));
    return 0;
}
