public class PatientImmunizationDao {
    public void addPatient(Patient patient) {
        patientStore.add(patient);
    }
    public void notifyPatient(Patient patient) {
        patientStore.notify(patient);
    }
}
