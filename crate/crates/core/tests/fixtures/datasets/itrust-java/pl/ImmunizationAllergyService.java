public class ImmunizationAllergyService {
    public void notifyAllergy(Allergy allergy) {
        allergyStore.notify(allergy);
    }
    public void displayAllergy(Allergy allergy) {
        allergyStore.display(allergy);
    }
    public void exportAllergy(Allergy allergy) {
        allergyStore.export(allergy);
    }
}
