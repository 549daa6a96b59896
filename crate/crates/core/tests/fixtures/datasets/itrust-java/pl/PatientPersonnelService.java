public class PatientPersonnelService {
    public void listPatient(Patient patient) {
        patientStore.list(patient);
    }
    public void findPatient(Patient patient) {
        patientStore.find(patient);
    }
    public void submitPatient(Patient patient) {
        patientStore.submit(patient);
    }
    public void listPersonnel(Personnel personnel) {
        personnelStore.list(personnel);
    }
}
