public class PatientAllergyHandler {
    public void exportAllergy(Allergy allergy) {
        allergyStore.export(allergy);
    }
    public void findAllergy(Allergy allergy) {
        allergyStore.find(allergy);
    }
    public void cancelAllergy(Allergy allergy) {
        allergyStore.cancel(allergy);
    }
}
