public class HospitalReportHandler {
    public void loadHospital(Hospital hospital) {
        hospitalStore.load(hospital);
    }
    public void exportReport(Report report) {
        reportStore.export(report);
    }
    public void saveReport(Report report) {
        reportStore.save(report);
    }
    public void cancelHospital(Hospital hospital) {
        hospitalStore.cancel(hospital);
    }
}
