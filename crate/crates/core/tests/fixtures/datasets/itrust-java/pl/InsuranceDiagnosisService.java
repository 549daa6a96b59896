public class InsuranceDiagnosisService {
    public void listDiagnosis(Diagnosis diagnosis) {
        diagnosisStore.list(diagnosis);
    }
    public void removeDiagnosis(Diagnosis diagnosis) {
        diagnosisStore.remove(diagnosis);
    }
    public void exportInsurance(Insurance insurance) {
        insuranceStore.export(insurance);
    }
}
